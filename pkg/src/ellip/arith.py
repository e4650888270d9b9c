"""Elementary multiplicative number theory.

Factorization, Möbius, divisors, the Kronecker symbol, Dirichlet characters
stored as explicit value tables, and twisted divisor sums.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce

import numpy as np

from .errors import ModulusTooLarge, Overflow

_TRIAL_LIMIT = 10**6
MAX_CHARACTER_MODULUS = 10**4


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------

def _small_primes(limit: int) -> np.ndarray:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve)


@lru_cache(maxsize=None)
def _primes_upto(limit: int) -> tuple[int, ...]:
    return tuple(int(p) for p in _small_primes(limit))


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with the first 13 prime bases (deterministic below 3.3e24)."""
    if n < 2:
        return False
    bases = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in bases:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@lru_cache(maxsize=65536)
def factorint(n: int) -> dict[int, int]:
    """Prime factorization ``{p: e}`` by trial division, then Pollard-Brent."""
    if n < 1:
        raise ValueError(f"factorint needs n >= 1, got {n}")
    out: dict[int, int] = {}
    limit = min(_TRIAL_LIMIT, math.isqrt(n))
    for p in _primes_upto(max(limit, 2)):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        stack = [n]
        rng = random.Random(n)  # deterministic per input
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_probable_prime(m):
                out[m] = out.get(m, 0) + 1
                continue
            f = _pollard_brent(m, rng)
            stack.extend((f, m // f))
    return dict(sorted(out.items()))


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of ``n``."""
    divs = [1]
    for p, e in factorint(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError(f"mobius needs n >= 1, got {n}")
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def mobius_sieve(M: int) -> np.ndarray:
    """Array ``mu`` of length M+1 with ``mu[n] = mobius(n)`` (``mu[0] = 0``)."""
    mu = np.ones(M + 1, dtype=np.int64)
    mu[0] = 0
    if M < 2:
        return mu
    for p in _small_primes(M):
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu


def squarefree_part_ok(n: int) -> bool:
    return all(e == 1 for e in factorint(n).values())


def euler_phi(n: int) -> int:
    out = n
    for p in factorint(n):
        out = out // p * (p - 1)
    return out


# ---------------------------------------------------------------------------
# Kronecker symbol
# ---------------------------------------------------------------------------

def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi needs a positive odd modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for arbitrary integers."""
    if n == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if D % 2 == 0:
            return 0
        if v % 2 and D % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * jacobi(D, n)


# ---------------------------------------------------------------------------
# Dirichlet characters
# ---------------------------------------------------------------------------

def _snap_roots(exps: np.ndarray, order: int) -> np.ndarray:
    """exp(2 pi i e / order), exact at quarter turns, 0 where e < 0."""
    vals = np.exp(2j * np.pi * np.where(exps < 0, 0, exps) / order)
    quarter = (exps >= 0) & ((4 * exps) % order == 0)
    q = (4 * exps[quarter]) // order % 4
    vals[quarter] = np.array([1, 1j, -1, -1j])[q]
    vals[exps < 0] = 0
    return vals


class Character:
    """A Dirichlet character mod ``modulus``.

    Stored as a table of exponents: ``chi(a) = exp(2 pi i exps[a] / order)``
    and ``exps[a] = -1`` marks ``gcd(a, modulus) > 1``.
    """

    __slots__ = ("modulus", "order", "exps", "values", "exact", "label")

    def __init__(self, modulus: int, exps, order: int, label: str = ""):
        exps = np.asarray(exps, dtype=np.int64).copy()
        if exps.shape != (modulus,):
            raise ValueError("exponent table must have one entry per residue")
        live = exps[exps >= 0] % order
        exps[exps >= 0] = live
        g = reduce(math.gcd, live.tolist(), order)
        if g > 1:
            order //= g
            exps[exps >= 0] //= g
        self.modulus = int(modulus)
        self.order = int(order)
        self.exps = exps
        self.exps.setflags(write=False)
        self.values = _snap_roots(exps, self.order)
        self.values.setflags(write=False)
        self.exact = None
        if self.order <= 2:
            ex = np.where(exps < 0, 0, np.where(exps == 0, 1, -1)).astype(np.int64)
            ex.setflags(write=False)
            self.exact = ex
        self.label = label

    # flags ---------------------------------------------------------------
    @property
    def is_principal(self) -> bool:
        return self.order == 1

    @property
    def is_quadratic(self) -> bool:
        return self.order == 2

    @property
    def is_real(self) -> bool:
        return self.order <= 2

    @property
    def parity(self) -> int:
        v = self.values[self.modulus - 1]
        return 1 if v.real > 0 else -1

    # evaluation ----------------------------------------------------------
    def __call__(self, n: int):
        a = n % self.modulus
        if self.exact is not None:
            return int(self.exact[a])
        return complex(self.values[a])

    def table(self, M: int) -> np.ndarray:
        """Values at n = 0..M (complex, or int64 for real characters)."""
        idx = np.arange(M + 1) % self.modulus
        if self.exact is not None:
            return self.exact[idx]
        return self.values[idx]

    # algebra -------------------------------------------------------------
    def __mul__(self, other: "Character") -> "Character":
        N = self.modulus * other.modulus
        L = self.order * other.order // math.gcd(self.order, other.order)
        a = np.arange(N)
        e1 = self.exps[a % self.modulus]
        e2 = other.exps[a % other.modulus]
        exps = e1 * (L // self.order) + e2 * (L // other.order)
        exps[(e1 < 0) | (e2 < 0)] = -1
        return Character(N, exps, L, label=f"({self.label})*({other.label})")

    def __pow__(self, k: int) -> "Character":
        exps = np.where(self.exps < 0, -1, (self.exps * k) % self.order)
        return Character(self.modulus, exps, self.order, label=f"({self.label})^{k}")

    def lift(self, modulus: int) -> "Character":
        """Induced character mod a multiple of the modulus."""
        if modulus % self.modulus:
            raise ValueError("can only lift to a multiple of the modulus")
        a = np.arange(modulus)
        exps = self.exps[a % self.modulus].copy()
        coprime = np.gcd(a, modulus) == 1
        exps[~coprime] = -1
        return Character(modulus, exps, self.order, label=self.label)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Character):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self.order == other.order
            and np.array_equal(self.exps, other.exps)
        )

    def __hash__(self) -> int:
        return hash((self.modulus, self.order, self.exps.tobytes()))

    def __repr__(self) -> str:
        name = f" {self.label}" if self.label else ""
        return f"<Character mod {self.modulus} order {self.order}{name}>"


def principal_character(N: int = 1) -> Character:
    a = np.arange(N)
    exps = np.where(np.gcd(a, N) == 1, 0, -1)
    return Character(N, exps, 1, label=f"1 mod {N}")


def kronecker_character(D: int) -> Character:
    """n -> kronecker(D, n) as a character of modulus |D| or 4|D|."""
    if D == 0:
        raise ValueError("kronecker(0, .) is not a Dirichlet character")
    N = abs(D) if D % 4 in (0, 1) else 4 * abs(D)
    vals = [kronecker(D, a) for a in range(N)]
    exps = [0 if v == 1 else 1 if v == -1 else -1 for v in vals]
    return Character(N, exps, 2, label=f"kronecker({D}, .)")


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    qs = list(factorint(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable")


def _cyclic_components(p: int, e: int):
    """Generators, orders and log tables for (Z/p^e)^x, one per cyclic factor."""
    q = p**e
    if p == 2:
        if e == 1:
            return []
        if e == 2:
            logs = np.full(q, -1, dtype=np.int64)
            logs[1], logs[3] = 0, 1
            return [(2, q, logs)]
        # a = (-1)^u 5^v
        log_sign = np.full(q, -1, dtype=np.int64)
        log_five = np.full(q, -1, dtype=np.int64)
        order5 = 2 ** (e - 2)
        x = 1
        for v in range(order5):
            log_sign[x], log_five[x] = 0, v
            log_sign[q - x], log_five[q - x] = 1, v
            x = x * 5 % q
        return [(2, q, log_sign), (order5, q, log_five)]
    g = _primitive_root(p)
    if e > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    order = q // p * (p - 1)
    logs = np.full(q, -1, dtype=np.int64)
    x = 1
    for k in range(order):
        logs[x] = k
        x = x * g % q
    return [(order, q, logs)]


def character_group(N: int) -> list[Character]:
    """All phi(N) characters mod N; the principal character comes first."""
    if N < 1:
        raise ValueError("modulus must be positive")
    if N > MAX_CHARACTER_MODULUS:
        raise ModulusTooLarge(f"modulus {N} exceeds {MAX_CHARACTER_MODULUS}")
    comps = []
    for p, e in factorint(N).items():
        comps.extend(_cyclic_components(p, e))
    a = np.arange(N)
    coprime = np.gcd(a, N) == 1
    if not comps:
        return [Character(N, np.where(coprime, 0, -1), 1, label=f"chi_{N}[]")]
    L = reduce(lambda x, y: x * y // math.gcd(x, y), (c[0] for c in comps))
    logs = np.stack([c[2][a % c[1]] for c in comps])  # (ncomp, N)
    scale = np.array([L // c[0] for c in comps], dtype=np.int64)
    out = []
    for idx in itertools.product(*(range(c[0]) for c in comps)):
        coeff = np.array(idx, dtype=np.int64) * scale
        exps = (coeff[:, None] * logs).sum(axis=0) % L
        exps[~coprime] = -1
        out.append(Character(N, exps, L, label=f"chi_{N}{list(idx)}"))
    return out


# ---------------------------------------------------------------------------
# twisted divisor sums
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DivisorSumSpec:
    k: int
    chi1: Character
    chi2: Character


def _power(d: int, k: int):
    return d**k if k >= 0 else Fraction(1, d ** (-k))


def _guard(n: int, k, exact: bool) -> None:
    if n <= 1:
        return
    bits = abs(k) * math.log2(n)
    if (not exact and bits > 1000) or bits > 100_000:
        raise Overflow(f"n={n}, k={k} is beyond the supported magnitude")


def sigma_twisted(spec: DivisorSumSpec, n: int):
    """sum over d | n of chi1(d) chi2(n/d) d^k.

    Exact (int or Fraction) when both characters are real, complex otherwise.
    """
    if n < 1:
        raise ValueError("n must be positive")
    chi1, chi2, k = spec.chi1, spec.chi2, spec.k
    exact = chi1.is_real and chi2.is_real
    _guard(n, k, exact)
    total = 0
    for d in divisors(n):
        c = chi1(d) * chi2(n // d)
        if c == 0:
            continue
        total += c * (_power(d, k) if exact else float(d) ** k)
    return total


def sigma_char(t, chi: Character, n: int):
    """sum over d | n of chi(d) d^t; ``t`` may be a complex exponent."""
    if n < 1:
        raise ValueError("n must be positive")
    if isinstance(t, (int, np.integer)):
        t = int(t)
        exact = chi.is_real
        _guard(n, t, exact)
        if exact:
            return sum(chi(d) * _power(d, t) for d in divisors(n))
        return sum(chi(d) * float(d) ** t for d in divisors(n))
    _guard(n, abs(complex(t).real), False)
    return sum(chi(d) * complex(d) ** t for d in divisors(n))
