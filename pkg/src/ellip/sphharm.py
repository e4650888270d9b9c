"""Harmonic polynomials for Delta_A, zonal harmonics and Weyl sums.

Delta_A = sum_ij a*_ij d^2/dx_i dx_j with (a*_ij) = A^{-1}.  Polynomials are
kept exactly (Fraction coefficients); evaluation on integer vectors is exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce

import mpmath
import numpy as np

from . import _dd
from .arith import divisors, mobius
from .errors import DegenerateGegenbauer, GridTooCoarse, MismatchDetected
from .lattice_enum import omega_points, representations
from .quadform import QuadraticForm

Exps = tuple[int, ...]


# ---------------------------------------------------------------- dimensions

def _binom(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def dim_harmonic(d: int, nu: int) -> int:
    """Dimension of degree-nu harmonics on S^d: C(d+nu, nu) - C(d-2+nu, nu-2)."""
    if d < 2 or nu < 0:
        raise ValueError("need d >= 2 and nu >= 0")
    return _binom(d + nu, nu) - _binom(d - 2 + nu, nu - 2)


def gegenbauer(nu: int, lam: float, t):
    """C_nu^lam(t) by the three-term recurrence (vectorized over t)."""
    if lam <= 0:
        raise ValueError("Gegenbauer index must be positive")
    if nu < 0:
        raise ValueError("degree must be non-negative")
    t = np.asarray(t, dtype=float)
    prev, cur = np.ones_like(t), 2.0 * lam * t
    if nu == 0:
        return prev if prev.ndim else float(prev)
    for k in range(2, nu + 1):
        prev, cur = cur, (2.0 * t * (k + lam - 1) * cur - (k + 2 * lam - 2) * prev) / k
    return cur if cur.ndim else float(cur)


@dataclass(frozen=True)
class ZonalSpec:
    d: int
    nu: int
    lam: float = field(init=False)

    def __post_init__(self):
        if self.d < 2 or self.nu < 0:
            raise ValueError("need d >= 2 and nu >= 0")
        object.__setattr__(self, "lam", (self.d - 1) / 2)


def zonal(spec: ZonalSpec, x, y):
    """Z_nu(x, y) = n(nu) C_nu^lam(<x,y>) / C_nu^lam(1), normalized so Z(x, x) = n(nu)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    for v in (x, y):
        if np.any(np.abs(np.linalg.norm(v, axis=-1) - 1.0) > 1e-9):
            raise ValueError("arguments must be unit vectors")
    c1 = gegenbauer(spec.nu, spec.lam, 1.0)
    if c1 == 0:
        raise DegenerateGegenbauer(f"C_{spec.nu}^{spec.lam}(1) = 0")
    t = np.clip(np.sum(x * y, axis=-1), -1.0, 1.0)
    return dim_harmonic(spec.d, spec.nu) * gegenbauer(spec.nu, spec.lam, t) / c1


# ---------------------------------------------------------------- polynomials

def monomials(r: int, deg: int) -> list[Exps]:
    """Exponent tuples of total degree ``deg`` in r variables, lexicographically descending."""
    if deg < 0:
        return []
    out = []
    for combo in itertools.combinations_with_replacement(range(r), deg):
        e = [0] * r
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(set(out), reverse=True)


def _laplacian_terms(terms: dict[Exps, Fraction], A_inv) -> dict[Exps, Fraction]:
    r = len(A_inv)
    out: dict[Exps, Fraction] = {}
    for e, c in terms.items():
        for i in range(r):
            for j in range(r):
                a = A_inv[i][j]
                if a == 0:
                    continue
                if i == j:
                    f = e[i] * (e[i] - 1)
                    if not f:
                        continue
                    ne = list(e)
                    ne[i] -= 2
                else:
                    f = e[i] * e[j]
                    if not f:
                        continue
                    ne = list(e)
                    ne[i] -= 1
                    ne[j] -= 1
                key = tuple(ne)
                out[key] = out.get(key, 0) + a * f * c
    return {k: Fraction(v) for k, v in out.items() if v != 0}


@dataclass(frozen=True)
class HarmonicPoly:
    """Homogeneous polynomial with exact coefficients, ``terms`` maps exponents to Fractions."""

    degree: int
    terms: tuple[tuple[Exps, Fraction], ...]

    @classmethod
    def from_dict(cls, terms: dict, degree: int | None = None) -> "HarmonicPoly":
        clean = {tuple(int(v) for v in k): Fraction(c) for k, c in terms.items() if c != 0}
        degs = {sum(k) for k in clean}
        if degree is None:
            degree = degs.pop() if degs else 0
        if degs - {degree}:
            raise ValueError("polynomial is not homogeneous")
        return cls(degree, tuple(sorted(clean.items(), reverse=True)))

    @classmethod
    def constant(cls, r: int, c=1) -> "HarmonicPoly":
        return cls.from_dict({(0,) * r: c}, 0)

    @property
    def r(self) -> int:
        return len(self.terms[0][0]) if self.terms else 0

    def as_dict(self) -> dict[Exps, Fraction]:
        return dict(self.terms)

    def laplacian(self, form: QuadraticForm) -> dict[Exps, Fraction]:
        return _laplacian_terms(self.as_dict(), form.A_inv)

    def is_harmonic(self, form: QuadraticForm) -> bool:
        return not self.laplacian(form)

    def integer_form(self) -> tuple[int, list[tuple[Exps, int]]]:
        """(L, [(e, c)]) with integer c such that P = (sum c x^e) / L."""
        L = reduce(math.lcm, (c.denominator for _, c in self.terms), 1)
        return L, [(e, int(c * L)) for e, c in self.terms]

    def __call__(self, m) -> Fraction:
        """Exact value at a rational or integer vector."""
        m = [Fraction(v) for v in m]
        total = Fraction(0)
        for e, c in self.terms:
            p = c
            for v, k in zip(m, e):
                if k:
                    p *= v**k
            total += p
        return total

    def sum_over(self, pts: np.ndarray) -> Fraction:
        """Exact sum of P over the integer rows of ``pts``."""
        if len(pts) == 0 or not self.terms:
            return Fraction(0)
        L, ints = self.integer_form()
        pts = np.asarray(pts, dtype=np.int64)
        bound = int(np.max(np.abs(pts))) if pts.size else 0
        weight = sum(abs(c) for _, c in ints) * bound**self.degree * len(pts)
        arr = pts if weight < 2**62 else pts.astype(object)
        total = 0
        for e, c in ints:
            col = np.ones(len(pts), dtype=arr.dtype)
            for i, k in enumerate(e):
                if k:
                    col = col * arr[:, i] ** k
            total += c * int(col.sum())
        return Fraction(total, L)

    def evaluate(self, x) -> np.ndarray:
        """Float values on the rows of ``x``."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros(len(x))
        for e, c in self.terms:
            out += float(c) * np.prod(x ** np.array(e), axis=1)
        return out


def _rref_nullspace(rows: list[dict[int, Fraction]], ncols: int) -> list[dict[int, Fraction]]:
    """Nullspace basis of a sparse rational matrix, one dict per vector."""
    rows = [dict(r) for r in rows if r]
    pivots: list[tuple[int, dict[int, Fraction]]] = []
    for col in range(ncols):
        cand = [k for k, r in enumerate(rows) if col in r]
        if not cand:
            continue
        k = min(cand, key=lambda idx: len(rows[idx]))
        prow = rows.pop(k)
        inv = 1 / prow[col]
        prow = {c: v * inv for c, v in prow.items()}
        for other in itertools.chain(rows, (p for _, p in pivots)):
            f = other.get(col)
            if f:
                for c, v in prow.items():
                    nv = other.get(c, 0) - f * v
                    if nv:
                        other[c] = nv
                    else:
                        other.pop(c, None)
        pivots.append((col, prow))
        rows = [r for r in rows if r]
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = {free: Fraction(1)}
        for c, prow in pivots:
            v = prow.get(free)
            if v:
                vec[c] = -v
        basis.append(vec)
    return basis


def harmonic_basis(form: QuadraticForm, nu: int) -> list[HarmonicPoly]:
    """Exact basis of the degree-nu polynomials killed by Delta_A.

    Basis vectors are scaled to primitive integer coefficient vectors.
    """
    if nu < 0:
        raise ValueError("degree must be non-negative")
    r = form.r
    cols = monomials(r, nu)
    if nu < 2:
        return [HarmonicPoly.from_dict({e: 1}, nu) for e in cols]
    row_index = {e: k for k, e in enumerate(monomials(r, nu - 2))}
    # N A^{-1} is integral and has the same nullspace
    scaled = [[x * form.level for x in row] for row in form.A_inv]
    rows: list[dict[int, Fraction]] = [dict() for _ in row_index]
    for j, e in enumerate(cols):
        for key, v in _laplacian_terms({e: Fraction(1)}, scaled).items():
            rows[row_index[key]][j] = v
    out = []
    for vec in _rref_nullspace(rows, len(cols)):
        L = reduce(math.lcm, (v.denominator for v in vec.values()), 1)
        ints = {j: int(v * L) for j, v in vec.items()}
        g = reduce(math.gcd, ints.values())
        lead = ints[min(ints)]
        g = g if lead > 0 else -g
        out.append(HarmonicPoly.from_dict({cols[j]: Fraction(v, g) for j, v in ints.items()}, nu))
    return out


# ---------------------------------------------------------------- theta and Weyl sums

def theta_coeff(form: QuadraticForm, P: HarmonicPoly, n: int) -> Fraction:
    """r_Theta(n) = sum of P(m) over Q(m) = n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return P.sum_over(representations(form, n))


def weyl_sum(form: QuadraticForm, P: HarmonicPoly, n: int) -> tuple[Fraction, Fraction]:
    """Sum of P over the height-n rational points, computed two ways.

    Direct: n^{-nu} sum_{m in Omega_n} P(m).
    Mobius: n^{-nu} sum_{delta | n} mu(delta) delta^nu r_Theta(n^2 / delta^2).
    """
    if n < 1:
        raise ValueError("height must be positive")
    nu = P.degree
    scale = Fraction(1, n**nu)
    direct = P.sum_over(omega_points(form, n)) * scale
    mob = Fraction(0)
    for delta in divisors(n):
        mu = mobius(delta)
        if mu:
            mob += mu * delta**nu * theta_coeff(form, P, (n // delta) ** 2)
    mob *= scale
    if direct != mob:
        raise MismatchDetected(f"Weyl sum at n={n}: direct {direct} != Mobius {mob}")
    return direct, mob


# ---------------------------------------------------------------- spectral projection on S^2

def fibonacci_sphere(count: int) -> np.ndarray:
    """Near-uniform deterministic points on S^2."""
    k = np.arange(count) + 0.5
    z = 1.0 - 2.0 * k / count
    rho = np.sqrt(1.0 - z * z)
    phi = np.pi * (3.0 - np.sqrt(5.0)) * k
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def default_test_points(count: int = 200) -> np.ndarray:
    poles = np.vstack([np.eye(3), -np.eye(3)])
    return np.vstack([poles, fibonacci_sphere(count)])


@dataclass
class SpectralProjection:
    nu: int
    test_points: np.ndarray
    values: np.ndarray
    sup_norm: float
    self_check_error: float


def _grid_float(n_theta: int, n_phi: int):
    z, wz = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    Z, PHI = np.meshgrid(z, phi, indexing="ij")
    rho = np.sqrt(1 - Z * Z)
    Y = np.column_stack([(rho * np.cos(PHI)).ravel(), (rho * np.sin(PHI)).ravel(), Z.ravel()])
    W = np.repeat(wz / (2 * n_phi), n_phi)
    return Y, W


def _legendre_float(nu: int, t: np.ndarray) -> np.ndarray:
    return gegenbauer(nu, 0.5, t)


def _project_float(values: np.ndarray, Y, W, nu, X) -> np.ndarray:
    t = np.clip(X @ Y.T, -1.0, 1.0)
    return (2 * nu + 1) * (_legendre_float(nu, t) @ (W * values))


def _mp_gauss_legendre(n: int, dps: int):
    with mpmath.workdps(dps):
        x0, _ = np.polynomial.legendre.leggauss(n)
        nodes, weights = [], []
        for guess in x0:
            x = mpmath.mpf(guess)
            for _ in range(100):
                p0, p1 = mpmath.mpf(1), x
                for k in range(2, n + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < mpmath.mpf(10) ** (-dps + 3):
                    break
            p0, p1 = mpmath.mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
    return nodes, weights


@lru_cache(maxsize=32)
def _mp_nodes(n_theta: int, n_phi: int, dps: int):
    z, wz = _mp_gauss_legendre(n_theta, dps)
    nodes, weights = [], []
    with mpmath.workdps(dps):
        trig = [(mpmath.cospi(mpmath.mpf(2 * k) / n_phi), mpmath.sinpi(mpmath.mpf(2 * k) / n_phi))
                for k in range(n_phi)]
        for zi, wi in zip(z, wz):
            rho = mpmath.sqrt(1 - zi * zi)
            for c, s in trig:
                nodes.append((rho * c, rho * s, zi))
                weights.append(wi / (2 * n_phi))
    return tuple(nodes), tuple(weights)


def _unit_dd(X: np.ndarray, dps: int):
    """Test points renormalized in extended precision (off-sphere drift would leak other degrees)."""
    cols = [[], [], []]
    with mpmath.workdps(dps):
        for row in X:
            v = [mpmath.mpf(float(c)) for c in row]
            nrm = mpmath.sqrt(sum(c * c for c in v))
            for c in range(3):
                cols[c].append(v[c] / nrm)
    return [_dd.from_mp(c) for c in cols]


def _project_dd(F_mp, n_theta: int, n_phi: int, dps: int, nu: int, X: np.ndarray) -> np.ndarray:
    nodes, weights = _mp_nodes(n_theta, n_phi, dps)
    with mpmath.workdps(dps):
        wf = _dd.from_mp([w * mpmath.mpf(F_mp(y)) for y, w in zip(nodes, weights)])
    Ydd = [_dd.from_mp([y[c] for y in nodes]) for c in range(3)]
    Xdd = _unit_dd(X, dps)
    shape = (len(X), len(nodes))

    def grid(a, col):
        return np.broadcast_to(a[0][..., None] if col else a[0], shape), \
            np.broadcast_to(a[1][..., None] if col else a[1], shape)

    t = (np.zeros(shape), np.zeros(shape))
    for c in range(3):
        t = _dd.add(t, _dd.mul(grid(Xdd[c], True), grid(Ydd[c], False)))
    p0, p1 = (np.ones(shape), np.zeros(shape)), t
    if nu == 0:
        p1 = p0
    for k in range(1, nu):
        num = _dd.sub(_dd.mul_scalar(_dd.mul(t, p1), float(2 * k + 1)), _dd.mul_scalar(p0, float(k)))
        p0, p1 = p1, _dd.div_scalar(num, float(k + 1))
    total = _dd.tree_sum(_dd.mul(p1, grid(wf, False)), axis=1)
    return _dd.to_float(_dd.mul_scalar(total, float(2 * nu + 1)))


def _self_check(nu: int, Y, W, X) -> float:
    # project the zonal harmonic with a pole off every grid symmetry axis
    pole = np.array([0.36, -0.48, 0.8])
    ref = _legendre_float(nu, np.clip(Y @ pole, -1, 1))
    got = _project_float(ref, Y, W, nu, X)
    want = _legendre_float(nu, np.clip(X @ pole, -1, 1))
    return float(np.max(np.abs(got - want)))


def spectral_project(F, nu: int, n_theta: int | None = None, n_phi: int | None = None,
                     test_points: np.ndarray | None = None,
                     precision: str = "double", F_mp=None, dps: int = 40) -> SpectralProjection:
    """Degree-nu component F_nu(x) = int F(y) Z_nu(x, y) dmu(y) on S^2.

    ``F`` maps an (N, 3) array of unit vectors to N values.  With
    ``precision="double-double"`` the quadrature is carried in ~32 digits and
    ``F_mp`` (a callable on a 3-tuple of mpmath numbers) supplies F at the nodes;
    this is what makes decay below 1e-16 observable.
    """
    if nu < 0:
        raise ValueError("degree must be non-negative")
    n_theta = n_theta or nu + 24
    n_phi = n_phi or 2 * nu + 26
    X = default_test_points() if test_points is None else np.atleast_2d(np.asarray(test_points, float))
    Y, W = _grid_float(n_theta, n_phi)
    err = _self_check(nu, Y, W, X)
    if err > 1e-6:
        raise GridTooCoarse(f"self-check error {err:.3g} at nu={nu} with {n_theta}x{n_phi} grid")
    if precision == "double":
        vals = _project_float(np.asarray(F(Y), dtype=float), Y, W, nu, X)
    elif precision == "double-double":
        if F_mp is None:
            raise ValueError("double-double precision needs F_mp")
        vals = _project_dd(F_mp, n_theta, n_phi, dps, nu, X)
    else:
        raise ValueError(f"unknown precision {precision!r}")
    return SpectralProjection(nu, X, vals, float(np.max(np.abs(vals))), err)
