"""Equidistribution diagnostics, power-law fits and the truncated Perron integral."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import DegenerateData, EmptyPointSet, QuadratureNonConvergence
from .lattice_enum import RationalPoint, height_table, omega_points
from .quadform import QuadraticForm, sphere_map
from .sphharm import fibonacci_sphere


@dataclass(frozen=True)
class CapSpec:
    center: tuple[float, ...]
    angle: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float)
        if abs(np.linalg.norm(c) - 1.0) > 1e-9:
            raise ValueError("cap center must be a unit vector")
        if not 0 < self.angle < math.pi:
            raise ValueError("cap angle must lie in (0, pi)")

    @property
    def d(self) -> int:
        return len(self.center) - 1


@dataclass(frozen=True)
class FitResult:
    exponent: float
    log_constant: float
    max_abs_residual: float

    @property
    def constant(self) -> float:
        return math.exp(self.log_constant)


def cap_measure(d: int, theta: float) -> float:
    """Normalized surface measure of a cap of angular radius theta on S^d."""
    if d < 2:
        raise ValueError("need d >= 2")
    if not 0 < theta <= math.pi:
        raise ValueError("angle must lie in (0, pi]")
    f = lambda t: math.sin(t) ** (d - 1)
    num, _ = integrate.quad(f, 0.0, theta, epsabs=1e-13, epsrel=1e-13, limit=200)
    den, _ = integrate.quad(f, 0.0, math.pi, epsabs=1e-13, epsrel=1e-13, limit=200)
    return min(1.0, max(0.0, num / den))


def map_to_sphere(form: QuadraticForm, m: np.ndarray, heights) -> np.ndarray:
    """Unit vectors B (m / n) for numerators m (rows) and heights n."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    x = sphere_map(form)(m / np.asarray(heights, dtype=float).reshape(-1, 1))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def map_points_to_sphere(form: QuadraticForm, points: list[RationalPoint]) -> np.ndarray:
    if not points:
        return np.zeros((0, form.r))
    m = np.array([p.m for p in points])
    n = np.array([p.n for p in points])
    return map_to_sphere(form, m, n)


def default_caps(d: int = 2, count: int = 100) -> list[CapSpec]:
    """Fixed cap family: Fibonacci centers (seeded Gaussian centers if d != 2),
    angles cycling through pi/6, pi/3, pi/2."""
    if d == 2:
        centers = fibonacci_sphere(count)
    else:
        g = np.random.default_rng(20240601).standard_normal((count, d + 1))
        centers = g / np.linalg.norm(g, axis=1, keepdims=True)
    angles = (math.pi / 6, math.pi / 3, math.pi / 2)
    return [CapSpec(tuple(c), angles[i % 3]) for i, c in enumerate(centers)]


def discrepancy(points: np.ndarray, caps: list[CapSpec]) -> float:
    """max over caps of |fraction of points inside - cap measure|."""
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        raise EmptyPointSet("no points")
    if not caps:
        raise EmptyPointSet("no caps")
    pts = np.atleast_2d(pts)
    centers = np.array([c.center for c in caps])
    cosines = np.cos([c.angle for c in caps])
    inside = (pts @ centers.T) >= cosines[None, :] - 1e-12
    frac = inside.mean(axis=0)
    measures = np.array([cap_measure(c.d, c.angle) for c in caps])
    return float(np.max(np.abs(frac - measures)))


def fit_power_law(pairs) -> FitResult:
    """Least squares for log(count) = log_constant + exponent * log(T)."""
    pairs = list(pairs)
    if len(pairs) < 5:
        raise DegenerateData(f"need at least 5 points, got {len(pairs)}")
    T = np.array([p[0] for p in pairs], dtype=float)
    y = np.array([p[1] for p in pairs], dtype=float)
    if np.any(T <= 0) or np.any(y <= 0):
        raise DegenerateData("abscissae and counts must be positive")
    lx, ly = np.log(T), np.log(y)
    if np.ptp(lx) == 0:
        raise DegenerateData("all abscissae are equal")
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return FitResult(float(slope), float(intercept), float(np.max(np.abs(resid))))


# ---------------------------------------------------------------- Perron

@dataclass(frozen=True)
class PerronResult:
    value: complex
    H: float
    T: float
    beta: float
    M: int
    tail_estimate: float
    quad_error: float

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag


def _tail_estimate(omega: np.ndarray, beta: float, d: int) -> float:
    """Bound sum_{n>M} |Omega_n| n^-beta using |Omega_n| <= C n^(d-1) fitted on the data."""
    M = len(omega)
    n = np.arange(1, M + 1, dtype=float)
    mask = omega > 0
    C = float(np.max(omega[mask] / n[mask] ** (d - 1))) if mask.any() else 0.0
    expo = beta - d + 1
    if expo <= 1:
        return math.inf
    return C * M ** (1 - expo) / (expo - 1)


def perron_truncated(form: QuadraticForm, T: float, beta: float, H: float, M: int,
                     jobs: int | None = None, tol: float = 1e-8) -> PerronResult:
    """(1/2 pi i) int_{beta-iH}^{beta+iH} R(s) T^s / s ds with R the M-term partial sum
    of sum |Omega_n| n^-s.  Its real part approximates sum_{n <= T} |Omega_n|."""
    if abs(T - round(T)) < 1e-12:
        raise ValueError("T must not be an integer")
    if (2 * T) % 1 != 0:
        raise ValueError("T must be a half-integer")
    d = form.d
    if beta <= d:
        raise ValueError(f"beta must exceed the abscissa {d}")
    if H <= 0 or M < 1:
        raise ValueError("need H > 0 and M >= 1")
    omega = np.array([row[2] for row in height_table(form, M, jobs)], dtype=float)
    tail = _tail_estimate(omega, beta, d)
    if tail >= 1e-6 * T**beta:
        warnings.warn(f"coefficient tail estimate {tail:.3g} exceeds 1e-6 T^beta; raise M",
                      RuntimeWarning, stacklevel=2)
    keep = omega > 0
    logn = np.log(np.arange(1, M + 1, dtype=float))[keep]
    # fold T^s into the coefficients: sum a_n (T/n)^beta e^{i t log(T/n)}
    amp = omega[keep] * np.exp(beta * (math.log(T) - logn))
    phase = math.log(T) - logn

    def integrand(t):
        z = np.sum(amp * np.exp(1j * t * phase)) / complex(beta, t)
        return np.array([z.real, z.imag])

    total = np.zeros(2)
    err = 0.0
    panels = [(-H, -1.0), (-1.0, 1.0), (1.0, H)] if H > 1 else [(-H, H)]
    for a, b in panels:
        val, e, info = integrate.quad_vec(integrand, a, b, epsabs=tol, epsrel=tol,
                                          limit=100000, full_output=True)
        if not info.success:
            raise QuadratureNonConvergence(f"panel [{a}, {b}]: {info.message}")
        total += val
        err += e
    value = complex(total[0], total[1]) / (2 * math.pi)
    return PerronResult(value, H, T, beta, M, tail, err / (2 * math.pi))


# ---------------------------------------------------------------- rate report

PREDICTED = {
    "per_height": lambda d: -(d - 1) / (2 * d + 3),
    "cumulative": lambda d: -d / (2 * d + 2),
}


@dataclass
class RateReport:
    d: int
    per_height: list[tuple[int, int, float]]
    cumulative: list[tuple[int, int, float]]
    fit_height: FitResult | None
    fit_cumulative: FitResult | None
    predicted: dict[str, float] = field(default_factory=dict)

    def render(self) -> str:
        lines = [f"discrepancy report, d = {self.d}", "kind,T_or_n,npoints,discrepancy"]
        lines += [f"height,{n},{c},{v:.6e}" for n, c, v in self.per_height]
        lines += [f"cumulative,{n},{c},{v:.6e}" for n, c, v in self.cumulative]
        for name, fit in (("per_height", self.fit_height), ("cumulative", self.fit_cumulative)):
            got = "no fit" if fit is None else f"{fit.exponent:.4f}"
            lines.append(f"{name}: fitted exponent {got}; "
                         f"theorem upper-bound exponent {self.predicted[name]:.4f}")
        if self.d % 2:
            lines.append("note: the cumulative-rate theorem is stated for even d")
        return "\n".join(lines)


def _safe_fit(rows) -> FitResult | None:
    pairs = [(n, v) for n, _, v in rows if v > 0]
    try:
        return fit_power_law(pairs)
    except DegenerateData:
        return None


def rate_report(form: QuadraticForm, heights=(), T_grid=(), caps=None) -> RateReport:
    """Discrepancy per height n (gcd(n, N) = 1, Omega_n non-empty) and per cumulative T."""
    d = form.d
    caps = default_caps(d) if caps is None else caps
    per_height = []
    for n in heights:
        if math.gcd(n, form.level) != 1:
            continue
        m = omega_points(form, n)
        if len(m) == 0:
            continue
        x = map_to_sphere(form, m, np.full(len(m), n))
        per_height.append((n, len(m), discrepancy(x, caps)))
    cumulative = []
    if len(T_grid):
        tmax = max(T_grid)
        blocks = {n: omega_points(form, n) for n in range(1, tmax + 1)}
        for T in sorted(T_grid):
            m = np.concatenate([blocks[n] for n in range(1, T + 1)])
            h = np.concatenate([np.full(len(blocks[n]), n) for n in range(1, T + 1)])
            cumulative.append((T, len(m), discrepancy(map_to_sphere(form, m, h), caps)))
    return RateReport(
        d=d,
        per_height=per_height,
        cumulative=cumulative,
        fit_height=_safe_fit(per_height),
        fit_cumulative=_safe_fit(cumulative),
        predicted={k: f(d) for k, f in PREDICTED.items()},
    )
