"""Representations Q(m) = n and rational points of height n on Q = 1.

A rational point of height n is m / n with Q(m) = n^2 and
gcd(m_1, ..., m_r, n) = 1.  All counts are exact.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .arith import divisors, mobius
from .quadform import QuadraticForm, sphere_map


@dataclass(frozen=True)
class RationalPoint:
    m: tuple[int, ...]
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("height must be positive")
        if math.gcd(self.n, *self.m) != 1:
            raise ValueError(f"gcd({self.m}, {self.n}) != 1")

    def check(self, form: QuadraticForm) -> bool:
        return form(self.m) == self.n * self.n

    @property
    def coords(self) -> np.ndarray:
        return np.array(self.m, dtype=float) / self.n


@dataclass(frozen=True)
class CountRecord:
    n: int
    rep_sq: int
    omega: int
    cumulative: int


@lru_cache(maxsize=64)
def _fp_data(form: QuadraticForm):
    """Gram matrix and Fincke-Pohst coefficients: Q(x) = sum qd_i (x_i + sum_j qo_ij x_j)^2."""
    B = sphere_map(form).B
    qd = np.diag(B) ** 2
    qo = B / np.diag(B)[:, None]
    return form.matrix, qd, qo


def _run(form: QuadraticForm, target: int, height: int = 0, collect: bool = False):
    A, qd, qo = _fp_data(form)
    return _kernels.enumerate_solutions(A, qd, qo, np.int64(target), np.int64(height), collect)


def _lexsorted(pts: np.ndarray) -> np.ndarray:
    if len(pts) == 0:
        return pts
    order = np.lexsort(pts.T[::-1])
    return pts[order]


def representations(form: QuadraticForm, n: int) -> np.ndarray:
    """All m in Z^r with Q(m) = n, one per row, lexicographically ordered."""
    if n < 0:
        raise ValueError("n must be non-negative")
    _, _, pts = _run(form, n, collect=True)
    return _lexsorted(pts)


@lru_cache(maxsize=200_000)
def rep_count(form: QuadraticForm, n: int) -> int:
    """r_Q(n) by a counting traversal (no points stored)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    count, _, _ = _run(form, n)
    return int(count)


def _primitive_mask(pts: np.ndarray, n: int) -> np.ndarray:
    if len(pts) == 0:
        return np.zeros(0, dtype=bool)
    g = np.gcd.reduce(np.concatenate([pts, np.full((len(pts), 1), n)], axis=1), axis=1)
    return g == 1


def omega_points(form: QuadraticForm, n: int) -> np.ndarray:
    """Numerators m of the height-n rational points, one per row."""
    if n < 1:
        raise ValueError("height must be positive")
    pts = representations(form, n * n)
    return pts[_primitive_mask(pts, n)]


def rational_points(form: QuadraticForm, n: int) -> list[RationalPoint]:
    return [RationalPoint(tuple(int(v) for v in row), n) for row in omega_points(form, n)]


@lru_cache(maxsize=200_000)
def _height_counts(form: QuadraticForm, n: int) -> tuple[int, int]:
    count, prim, _ = _run(form, n * n, height=n)
    return int(count), int(prim)


def omega_count(form: QuadraticForm, n: int) -> int:
    """|Omega_n| by checking the gcd condition on every solution."""
    return _height_counts(form, n)[1]


def omega_count_mobius(form: QuadraticForm, n: int) -> int:
    """|Omega_n| = sum over d | n of mu(d) r_Q(n^2 / d^2)."""
    if n < 1:
        raise ValueError("height must be positive")
    return sum(mobius(d) * rep_count(form, (n // d) ** 2) for d in divisors(n))


def resolve_jobs(jobs: int | None = None) -> int:
    if jobs is None:
        jobs = int(os.environ.get("ELLIP_JOBS", "1"))
    if jobs < 1:
        raise ValueError("worker count must be >= 1")
    return jobs


def height_table(form: QuadraticForm, T: int, jobs: int | None = None) -> list[tuple[int, int, int]]:
    """(n, r_Q(n^2), |Omega_n|) for n = 1..T.

    Heights are independent; with several workers they are spread over a
    thread pool (the kernels release the GIL) and merged in order of n.
    """
    jobs = resolve_jobs(jobs)
    heights = list(range(1, T + 1))
    if jobs == 1:
        rows = [(n, *_height_counts(form, n)) for n in heights]
    else:
        # interleave large and small heights to balance the queue
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda n: (n, *_height_counts(form, n)), heights[::-1]))
    rows.sort(key=lambda t: t[0])
    return rows


def omega_cumulative(form: QuadraticForm, T: int, jobs: int | None = None) -> list[CountRecord]:
    if T < 1:
        raise ValueError("T must be positive")
    out, running = [], 0
    for n, rep, omega in height_table(form, T, jobs):
        running += omega
        out.append(CountRecord(n=n, rep_sq=rep, omega=omega, cumulative=running))
    return out


def omega_upto(form: QuadraticForm, T: int) -> tuple[np.ndarray, np.ndarray]:
    """All rational points of height <= T: (numerators, heights)."""
    pts, hs = [], []
    for n in range(1, T + 1):
        p = omega_points(form, n)
        pts.append(p)
        hs.append(np.full(len(p), n, dtype=np.int64))
    return np.concatenate(pts), np.concatenate(hs)
