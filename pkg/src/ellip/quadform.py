"""Integral positive definite quadratic forms Q(x) = x^T A x / 2.

Validation of the Gram matrix, the level N, the Kronecker discriminant of the
theta-series character and the real factorization A = 2 B^T B.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .arith import divisors, factorint
from .errors import (
    NotIntegral,
    NotPositiveDefinite,
    NotSymmetric,
    NumericalBreakdown,
    OddDiagonal,
)


def _bareiss_det(M: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    n = len(M)
    a = [row[:] for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def exact_inverse(M: list[list[int]]) -> list[list[Fraction]]:
    """Inverse over the rationals by Gauss-Jordan elimination."""
    n = len(M)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def _level_ok(N: int, inv: list[list[Fraction]]) -> bool:
    r = len(inv)
    for i in range(r):
        for j in range(r):
            v = N * inv[i][j]
            if v.denominator != 1:
                return False
            if i == j and v.numerator % 2:
                return False
    return True


def _is_four_times_odd_squarefree(N: int) -> bool:
    if N % 4 or (N // 4) % 2 == 0:
        return False
    return all(e == 1 for e in factorint(N // 4).values())


@dataclass(frozen=True)
class QuadraticForm:
    """Validated Gram data. Build with :func:`validate_form`."""

    A: tuple[tuple[int, ...], ...]
    r: int
    detA: int
    level: int
    nebentypus_disc: int
    paper_compliant: bool
    name: str = ""
    A_inv: tuple[tuple[Fraction, ...], ...] = field(repr=False, compare=False, default=())

    @property
    def d(self) -> int:
        """Dimension of the ellipsoid Q = 1."""
        return self.r - 1

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.A, dtype=np.int64)

    def __call__(self, m) -> int:
        """Q(m) for an integer vector, in exact integer arithmetic."""
        m = [int(x) for x in m]
        total = 0
        for i in range(self.r):
            row = self.A[i]
            total += m[i] * sum(row[j] * m[j] for j in range(self.r))
        return total // 2

    def evaluate(self, m: np.ndarray) -> np.ndarray:
        """Q on the rows of an integer array (int64)."""
        m = np.asarray(m, dtype=np.int64)
        return np.einsum("...i,ij,...j->...", m, self.matrix, m) // 2

    def info(self) -> dict:
        return {
            "r": self.r,
            "det": self.detA,
            "level": self.level,
            "nebentypus_disc": self.nebentypus_disc,
            "paper_compliant": self.paper_compliant,
        }


def compute_level(A_inv, detA: int) -> int:
    """Least N > 0 with N A^{-1} integral and even on the diagonal."""
    for N in divisors(2 * abs(detA)):
        if _level_ok(N, A_inv):
            return N
    raise AssertionError("level must divide 2 det A")


def nebentypus(r: int, detA: int) -> int:
    """Kronecker discriminant D; the character is n -> kronecker(D, n)."""
    if r % 2 == 0:
        return (-1) ** (r // 2) * detA
    return 2 * detA


def validate_form(A, name: str = "") -> QuadraticForm:
    arr = np.asarray(A)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"Gram matrix must be square, got shape {arr.shape}")
    r = arr.shape[0]
    if r < 3:
        raise ValueError(f"need at least 3 variables, got {r}")
    rows = []
    for row in arr.tolist():
        out = []
        for x in row:
            if isinstance(x, float) and not x.is_integer():
                raise NotIntegral(f"entry {x} is not an integer")
            if isinstance(x, Fraction) and x.denominator != 1:
                raise NotIntegral(f"entry {x} is not an integer")
            out.append(int(x))
        rows.append(out)
    for i in range(r):
        for j in range(i):
            if rows[i][j] != rows[j][i]:
                raise NotSymmetric(f"A[{i}][{j}] = {rows[i][j]} != A[{j}][{i}] = {rows[j][i]}")
    for i in range(r):
        if rows[i][i] % 2:
            raise OddDiagonal(f"diagonal entry A[{i}][{i}] = {rows[i][i]} is odd")
    for k in range(1, r + 1):
        minor = _bareiss_det([row[:k] for row in rows[:k]])
        if minor <= 0:
            raise NotPositiveDefinite(f"leading principal minor of order {k} is {minor}")
    detA = _bareiss_det(rows)
    inv = exact_inverse(rows)
    N = compute_level(inv, detA)
    return QuadraticForm(
        A=tuple(tuple(row) for row in rows),
        r=r,
        detA=detA,
        level=N,
        nebentypus_disc=nebentypus(r, detA),
        paper_compliant=_is_four_times_odd_squarefree(N),
        name=name,
        A_inv=tuple(tuple(row) for row in inv),
    )


def sphere(d: int) -> QuadraticForm:
    """x_0^2 + ... + x_d^2, i.e. A = 2 I_{d+1}."""
    return validate_form(2 * np.eye(d + 1, dtype=np.int64), name=f"sphere{d}")


def load_form(path) -> QuadraticForm:
    """Read ``{"gram": [[...]], "name": "..."}``."""
    data = json.loads(Path(path).read_text())
    return validate_form(data["gram"], name=data.get("name", Path(path).stem))


@dataclass(frozen=True)
class SphereMap:
    """A = 2 B^T B with B upper triangular, so Q(x) = |B x|^2."""

    B: np.ndarray
    Binv: np.ndarray

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.B.T


def sphere_map(form: QuadraticForm) -> SphereMap:
    A = form.matrix.astype(float) / 2.0
    r = form.r
    B = np.zeros((r, r))
    # upper-triangular Cholesky: A/2 = B^T B
    for i in range(r):
        s = A[i, i] - B[:i, i] @ B[:i, i]
        if s <= 0:
            raise NumericalBreakdown(f"non-positive pivot {s} at step {i}")
        B[i, i] = np.sqrt(s)
        for j in range(i + 1, r):
            B[i, j] = (A[i, j] - B[:i, i] @ B[:i, j]) / B[i, i]
    resid = np.max(np.abs(form.matrix - 2 * B.T @ B))
    if resid > 1e-9 * max(1.0, np.max(np.abs(form.matrix))):
        raise NumericalBreakdown(f"factorization residual {resid}")
    return SphereMap(B=B, Binv=np.linalg.inv(B))
