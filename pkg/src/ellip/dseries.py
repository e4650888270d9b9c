"""Truncated Dirichlet series and numerical checks of divisor-sum L-series identities.

A :class:`CoeffSeq` holds a(1..M). Integer-valued inputs keep a parallel
exact table (Python ints or Fractions) so identities over real characters
are checked with zero tolerance; complex characters fall back to float
arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .arith import (
    Character,
    DivisorSumSpec,
    divisors,
    factorint,
    mobius,
    mobius_sieve,
    principal_character,
    sigma_char,
    sigma_twisted,
)
from .errors import (
    LengthMismatch,
    MismatchDetected,
    NonInvertible,
    NotSquarefreeOddPart,
    Overflow,
    SingularFactor,
)


class CoeffSeq:
    """Coefficients a(1), ..., a(M) of a truncated Dirichlet series."""

    __slots__ = ("M", "a", "exact")

    def __init__(self, a, exact=None):
        a = np.array(a, dtype=complex)
        if a.ndim != 1 or len(a) < 2:
            raise ValueError("coefficient array must be 1-d with index 0 unused")
        self.M = len(a) - 1
        self.a = a
        self.a[0] = 0
        self.exact = None
        if exact is not None:
            ex = np.empty(self.M + 1, dtype=object)
            ex[:] = list(exact)
            ex[0] = 0
            self.exact = ex

    @classmethod
    def from_exact(cls, values) -> "CoeffSeq":
        """From a length-(M+1) sequence of ints/Fractions (index 0 ignored)."""
        values = list(values)
        return cls(np.array([complex(v) for v in values]), exact=values)

    @classmethod
    def from_function(cls, f, M: int) -> "CoeffSeq":
        vals = [0] + [f(n) for n in range(1, M + 1)]
        if all(isinstance(v, (int, Fraction, np.integer)) for v in vals):
            return cls.from_exact([int(v) if isinstance(v, np.integer) else v for v in vals])
        return cls(np.array(vals, dtype=complex))

    @classmethod
    def unit(cls, M: int) -> "CoeffSeq":
        return cls.from_exact([0, 1] + [0] * (M - 1))

    @classmethod
    def ones(cls, M: int) -> "CoeffSeq":
        return cls.from_exact([0] + [1] * M)

    @classmethod
    def mobius(cls, M: int) -> "CoeffSeq":
        return cls.from_exact([int(v) for v in mobius_sieve(M)])

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def __getitem__(self, n: int):
        if not 1 <= n <= self.M:
            raise IndexError(n)
        return self.exact[n] if self.exact is not None else complex(self.a[n])

    def __len__(self) -> int:
        return self.M

    def scaled(self, c) -> "CoeffSeq":
        if self.exact is not None and isinstance(c, (int, Fraction)):
            return CoeffSeq(self.a * complex(c), exact=self.exact * c)
        return CoeffSeq(self.a * c)

    def __sub__(self, other: "CoeffSeq") -> "CoeffSeq":
        _check_len(self, other)
        if self.exact is not None and other.exact is not None:
            return CoeffSeq(self.a - other.a, exact=self.exact - other.exact)
        return CoeffSeq(self.a - other.a)

    def __repr__(self) -> str:
        kind = "exact" if self.is_exact else "complex"
        head = ", ".join(str(self[n]) for n in range(1, min(self.M, 6) + 1))
        return f"CoeffSeq(M={self.M}, {kind}, [{head}, ...])"


def _check_len(a: CoeffSeq, b: CoeffSeq) -> None:
    if a.M != b.M:
        raise LengthMismatch(f"truncations differ: {a.M} vs {b.M}")


def _conv_arrays(x: np.ndarray, y: np.ndarray, M: int) -> np.ndarray:
    out = np.zeros(M + 1, dtype=x.dtype)
    nz = np.flatnonzero(y[1:]) + 1
    for d in range(1, M + 1):
        xd = x[d]
        if xd == 0:
            continue
        top = M // d
        e = nz[nz <= top]
        out[d * e] += xd * y[e]
    return out


def dirichlet_convolve(a: CoeffSeq, b: CoeffSeq) -> CoeffSeq:
    """c(n) = sum over de = n of a(d) b(e)."""
    _check_len(a, b)
    M = a.M
    if a.exact is not None and b.exact is not None:
        ex = _conv_arrays(a.exact, b.exact, M)
        return CoeffSeq(np.array([complex(v) for v in ex]), exact=ex)
    return CoeffSeq(_conv_arrays(a.a, b.a, M))


def convolve_all(*seqs: CoeffSeq) -> CoeffSeq:
    out = seqs[0]
    for s in seqs[1:]:
        out = dirichlet_convolve(out, s)
    return out


def _inverse_array(x: np.ndarray, M: int, inv1):
    out = np.zeros(M + 1, dtype=x.dtype)
    acc = np.zeros(M + 1, dtype=x.dtype)
    nz = np.flatnonzero(x[2:]) + 2
    for n in range(1, M + 1):
        v = inv1 if n == 1 else -inv1 * acc[n]
        out[n] = v
        if v == 0:
            continue
        top = M // n
        d = nz[nz <= top]
        acc[n * d] += x[d] * v
    return out


def dirichlet_inverse(a: CoeffSeq) -> CoeffSeq:
    """b with a * b = unit (requires a(1) != 0)."""
    if a[1] == 0:
        raise NonInvertible("a(1) = 0 has no Dirichlet inverse")
    M = a.M
    if a.exact is not None:
        a1 = a.exact[1]
        inv1 = a1 if a1 in (1, -1) else 1 / Fraction(a1)
        ex = _inverse_array(a.exact, M, inv1)
        return CoeffSeq(np.array([complex(v) for v in ex]), exact=ex)
    return CoeffSeq(_inverse_array(a.a, M, 1.0 / a.a[1]))


def lseries_coeffs(chi: Character, shift: int, M: int) -> CoeffSeq:
    """Coefficients chi(n) n^shift of L(s - shift, chi)."""
    if M < 1:
        raise ValueError("M must be positive")
    if abs(shift) * math.log2(max(M, 2)) > 1000:
        raise Overflow(f"n^{shift} overflows double precision at n = {M}")
    n = np.arange(M + 1)
    if chi.is_real and shift >= 0:
        vals = chi.table(M)
        ex = [int(v) * int(k) ** shift for k, v in enumerate(vals)]
        return CoeffSeq.from_exact(ex)
    if chi.is_real:
        ex = [0] + [int(v) * Fraction(1, int(k) ** -shift) for k, v in enumerate(chi.table(M)) if k]
        return CoeffSeq.from_exact(ex)
    vals = chi.table(M) * np.where(n > 0, n.astype(float), 1.0) ** shift
    return CoeffSeq(vals)


def square_embed(c: CoeffSeq) -> CoeffSeq:
    """b(m^2) = c(m), zero off the squares (same truncation)."""
    M = c.M
    m = np.arange(1, math.isqrt(M) + 1)
    a = np.zeros(M + 1, dtype=complex)
    a[m * m] = c.a[m]
    if c.exact is not None:
        ex = np.zeros(M + 1, dtype=object)
        ex[:] = 0
        ex[m * m] = c.exact[m]
        return CoeffSeq(a, exact=ex)
    return CoeffSeq(a)


def eval_partial(a: CoeffSeq, s: complex) -> complex:
    """sum_{n <= M} a(n) n^{-s}, with correctly rounded (fsum) accumulation."""
    s = complex(s)
    n = np.arange(1, a.M + 1, dtype=float)
    terms = a.a[1:] * np.exp(-s * np.log(n))
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


# ---------------------------------------------------------------------------
# generating series of rational points
# ---------------------------------------------------------------------------

def build_RQ(form, M: int, jobs: int | None = None) -> CoeffSeq:
    """a(n) = |Omega_n|, cross-checked against mu * (n -> r_Q(n^2))."""
    from .lattice_enum import height_table, rep_count

    rows = height_table(form, M, jobs)
    omega = [0] + [row[2] for row in rows]
    direct = CoeffSeq.from_exact(omega)
    rsq = CoeffSeq.from_exact([0] + [rep_count(form, n * n) for n in range(1, M + 1)])
    sieved = dirichlet_convolve(CoeffSeq.mobius(M), rsq)
    bad = [n for n in range(1, M + 1) if sieved.exact[n] != direct.exact[n]]
    if bad:
        n = bad[0]
        raise MismatchDetected(
            f"|Omega_{n}| = {direct.exact[n]} but mu * r_Q(n^2) gives {sieved.exact[n]}"
        )
    return direct


# ---------------------------------------------------------------------------
# identity reports
# ---------------------------------------------------------------------------

@dataclass
class IdentityReport:
    identity: str
    params: dict
    max_deviation: float
    mode: str
    tail_bound: float | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), default=_jsonable, sort_keys=False)


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Character):
        return x.label or repr(x)
    if isinstance(x, np.generic):
        return x.item()
    return str(x)


def _max_dev(lhs: CoeffSeq, rhs: CoeffSeq):
    if lhs.exact is not None and rhs.exact is not None:
        diff = lhs.exact[1:] - rhs.exact[1:]
        return max(abs(v) for v in diff), "exact"
    return float(np.max(np.abs(lhs.a[1:] - rhs.a[1:]))), "complex"


def _char_params(**chars) -> dict:
    return {k: v.label or repr(v) for k, v in chars.items()}


def verify_ramanujan(k: int, l: int, chi1: Character, chi2: Character, M: int) -> IdentityReport:
    """sum sigma_k sigma_l n^-s = L(s-k-l, chi1^2) L(s, chi2^2) L(s-k, chi) L(s-l, chi) / L(2s-k-l, chi^2)."""
    if M > 10**4:
        raise ValueError("M above desk scale")
    spec_k, spec_l = DivisorSumSpec(k, chi1, chi2), DivisorSumSpec(l, chi1, chi2)
    lhs = CoeffSeq.from_function(lambda n: sigma_twisted(spec_k, n) * sigma_twisted(spec_l, n), M)
    chi = chi1 * chi2
    rhs = convolve_all(
        lseries_coeffs(chi1**2, k + l, M),
        lseries_coeffs(chi2**2, 0, M),
        lseries_coeffs(chi, k, M),
        lseries_coeffs(chi, l, M),
        dirichlet_inverse(square_embed(lseries_coeffs(chi**2, k + l, M))),
    )
    dev, mode = _max_dev(lhs, rhs)
    return IdentityReport(
        "ramanujan", {"k": k, "l": l, "M": M, **_char_params(chi1=chi1, chi2=chi2)}, dev, mode
    )


def verify_square_identity(k: int, chi1: Character, chi2: Character, M: int) -> IdentityReport:
    """sum sigma_k(n^2) n^-s = L(s-2k, chi1^2) L(s, chi2^2) L(s-k, chi) / L(2s-2k, chi^2)."""
    if M > 10**4:
        raise ValueError("M above desk scale")
    spec = DivisorSumSpec(k, chi1, chi2)
    lhs = CoeffSeq.from_function(lambda n: sigma_twisted(spec, n * n), M)
    chi = chi1 * chi2
    rhs = convolve_all(
        lseries_coeffs(chi1**2, 2 * k, M),
        lseries_coeffs(chi2**2, 0, M),
        lseries_coeffs(chi, k, M),
        dirichlet_inverse(square_embed(lseries_coeffs(chi**2, 2 * k, M))),
    )
    dev, mode = _max_dev(lhs, rhs)
    return IdentityReport("square", {"k": k, "M": M, **_char_params(chi1=chi1, chi2=chi2)}, dev, mode)


def verify_mult_relation(k: int, chi1: Character, chi2: Character, m: int, n: int) -> bool:
    """sigma_k(m) sigma_k(n) = sum over d | (m, n) of chi(d) d^k sigma_k(mn / d^2)."""
    spec = DivisorSumSpec(k, chi1, chi2)
    chi = chi1 * chi2
    left = sigma_twisted(spec, m) * sigma_twisted(spec, n)
    right = sum(chi(d) * d**k * sigma_twisted(spec, m * n // (d * d)) for d in divisors(math.gcd(m, n)))
    if chi1.is_real and chi2.is_real:
        return left == right
    return abs(left - right) <= 1e-10 * max(1.0, abs(left))


def default_sample_points(sigma0: float, count: int = 5) -> list[complex]:
    """``count`` points sigma0 + it with t spread over [-2, 2]."""
    ts = np.linspace(-2.0, 2.0, count)
    return [complex(sigma0, t) for t in ts]


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def verify_delta_identity(
    k: int,
    chi1: Character,
    chi2: Character,
    delta: int,
    M: int = 5000,
    sample_points=None,
) -> IdentityReport:
    """Series over n with delta | n^2 of sigma_k(n^2 / delta) n^-s.

    Claimed equal to (2^ceil(j/2) delta')^-s sigma_k(2^eps delta') / sigma_{k-s}(chi, 2^eps delta')
    times sum sigma_k(n^2) n^-s, where delta = 2^j delta' with delta' odd squarefree
    and eps = j mod 2.

    Both sides are compared at complex sample points. The left side is summed
    with truncation matched to the right: writing c = 2^ceil(j/2) delta' and
    D = 2^eps delta', the identity is equivalent to
        sum_{mu | D} chi(mu) mu^(k-s) LHS_{<= M c / mu}(s) / sigma_{k-s}(chi, D) = RHS_M(s),
    a weighted mean of left partial sums whose weights add up to 1. The plain
    truncation LHS_{<= M}(s) is reported as ``naive_deviation`` together with a
    bound on its tail.
    """
    if delta < 1:
        raise ValueError("delta must be positive")
    j = 0
    odd = delta
    while odd % 2 == 0:
        odd //= 2
        j += 1
    if any(e > 1 for e in factorint(odd).values()):
        raise NotSquarefreeOddPart(f"odd part {odd} of delta = {delta} is not squarefree")
    eps = j % 2
    c = 2 ** ((j + 1) // 2) * odd
    D = 2**eps * odd
    chi = chi1 * chi2
    spec = DivisorSumSpec(k, chi1, chi2)
    if sample_points is None:
        sample_points = default_sample_points(2 * k + 3.5)
    sample_points = [complex(s) for s in sample_points]

    Mc = M * c
    ell = np.zeros(Mc + 1, dtype=complex)
    for n in range(c, Mc + 1, c):  # delta | n^2 iff c | n
        ell[n] = complex(sigma_twisted(spec, n * n // delta))
    square = CoeffSeq.from_function(lambda n: sigma_twisted(spec, n * n), M)
    sig_D = complex(sigma_twisted(spec, D))
    mus = divisors(D)
    logn = np.log(np.arange(1, Mc + 1, dtype=float))

    def partial(upto: int, s: complex) -> complex:
        t = ell[1 : upto + 1] * np.exp(-s * logn[:upto])
        return complex(math.fsum(t.real), math.fsum(t.imag))

    devs, naive, values = [], [], []
    for s in sample_points:
        sig_ks = complex(sigma_char(k - s, chi, D))
        if abs(sig_ks) < 1e-300:
            raise SingularFactor(f"sigma_(k-s)(chi, {D}) vanishes at s = {s}")
        rhs = c ** (-s) * sig_D / sig_ks * eval_partial(square, s)
        matched = sum(chi(mu) * mu ** (k - s) * partial(M * c // mu, s) for mu in mus) / sig_ks
        plain = partial(M, s)
        devs.append(_rel(matched, rhs))
        naive.append(_rel(plain, rhs))
        values.append(rhs)
    sigma_min = min(s.real for s in sample_points)
    # |sigma_k(n^2 / delta)| <= d(n^2) n^(2k) <= 2 n^(2k+1)
    tail = (
        2 * M ** (2 * k + 2 - sigma_min) / (sigma_min - 2 * k - 2)
        if sigma_min > 2 * k + 2
        else math.inf
    )
    rel_tail = tail / min(abs(v) for v in values)
    return IdentityReport(
        "delta",
        {"k": k, "delta": delta, "M": M, **_char_params(chi1=chi1, chi2=chi2),
         "sample_points": sample_points},
        max(devs),
        "sampled",
        rel_tail,
        {"naive_deviation": max(naive), "j": j, "eps": eps, "c": c, "D": D},
    )


def verify_odd_identity(
    k: int,
    j: int,
    chi1: Character,
    chi2: Character,
    chi3: Character,
    M: int = 5000,
    sample_points=None,
) -> IdentityReport:
    """Odd-n series of sum_{d | n} mu(d) chi3(d) d^j sigma_k(n/d) against its L-function form.

    The right side is E(s) L(s-k, chi1) L(s, chi2) / L(s-j, chi3) with
    E(s) = (1 - chi2(2) 2^-s)(1 - chi1(2) 2^(k-s)) / (1 - chi3(2) 2^(j-s)).
    Multiplying through by the denominator of E turns both sides into
    Dirichlet series; those are summed to the same index M at each sample point
    (``max_deviation``). ``naive_deviation`` compares the plain partial sums.
    """
    spec = DivisorSumSpec(k, chi1, chi2)
    if sample_points is None:
        sample_points = default_sample_points(max(j, k) + 2.5)
    sample_points = [complex(s) for s in sample_points]

    def lhs_coeff(n: int):
        if n % 2 == 0:
            return 0
        return sum(
            mobius(d) * chi3(d) * (d**j if j >= 0 else Fraction(1, d**-j)) * sigma_twisted(spec, n // d)
            for d in divisors(n)
        )

    lhs = CoeffSeq.from_function(lhs_coeff, M)
    F = convolve_all(
        lseries_coeffs(chi1, k, M),
        lseries_coeffs(chi2, 0, M),
        dirichlet_inverse(lseries_coeffs(chi3, j, M)),
    )

    def two_factor(coef) -> CoeffSeq:
        # 1 - coef 2^-s
        return CoeffSeq.from_function(lambda n: 1 if n == 1 else (-coef if n == 2 else 0), M)

    p1 = two_factor(chi1(2) * (2**k if k >= 0 else Fraction(1, 2**-k)))
    p2 = two_factor(chi2(2))
    p3 = two_factor(chi3(2) * (2**j if j >= 0 else Fraction(1, 2**-j)))
    left = dirichlet_convolve(p3, lhs)
    right = convolve_all(p1, p2, F)
    coeff_dev, _ = _max_dev(left, right)

    devs, naive, values = [], [], []
    for s in sample_points:
        e3 = 1 - chi3(2) * 2.0 ** (j - s)
        e = (1 - chi2(2) * 2.0 ** (-s)) * (1 - chi1(2) * 2.0 ** (k - s)) / e3
        rhs = e * eval_partial(F, s)
        devs.append(_rel(eval_partial(left, s) / e3, eval_partial(right, s) / e3))
        naive.append(_rel(eval_partial(lhs, s), rhs))
        values.append(rhs)
    sigma_min = min(s.real for s in sample_points)
    m = max(j, k)
    # |coefficient| <= d(n) * 2 sqrt(n) * n^max(j,k) <= 4 n^(max(j,k)+1)
    tail = 4 * M ** (m + 2 - sigma_min) / (sigma_min - m - 2) if sigma_min > m + 2 else math.inf
    rel_tail = tail / min(abs(v) for v in values)
    return IdentityReport(
        "odd",
        {"k": k, "j": j, "M": M, **_char_params(chi1=chi1, chi2=chi2, chi3=chi3),
         "sample_points": sample_points},
        max(devs),
        "sampled",
        rel_tail,
        {"naive_deviation": max(naive), "coefficient_deviation": float(abs(coeff_dev))},
    )


__all__ = [
    "CoeffSeq",
    "IdentityReport",
    "build_RQ",
    "dirichlet_convolve",
    "dirichlet_inverse",
    "eval_partial",
    "lseries_coeffs",
    "principal_character",
    "square_embed",
    "verify_delta_identity",
    "verify_mult_relation",
    "verify_odd_identity",
    "verify_ramanujan",
    "verify_square_identity",
]
