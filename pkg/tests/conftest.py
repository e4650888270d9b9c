import itertools
import math

import numpy as np
import pytest

from ellip.quadform import sphere, validate_form

NONDIAG = [[2, 1, 0], [1, 2, 0], [0, 0, 2]]


@pytest.fixture(scope="session")
def s2():
    return sphere(2)


@pytest.fixture(scope="session")
def s3():
    return sphere(3)


@pytest.fixture(scope="session")
def nondiag():
    return validate_form(NONDIAG, name="hex-plus-line")


def all_forms():
    return {
        "sphere2": sphere(2),
        "sphere3": sphere(3),
        "nondiag": validate_form(NONDIAG),
        "diag224": validate_form([[2, 0, 0], [0, 2, 0], [0, 0, 4]]),
        "nondiag4": validate_form([[2, 1, 0, 0], [1, 2, 1, 0], [0, 1, 2, 0], [0, 0, 0, 4]]),
    }


def box_solutions(form, nmax):
    """Exhaustive box search: {n: sorted list of m with Q(m) = n} for n <= nmax."""
    A = np.array(form.A, dtype=np.int64)
    lam = float(np.linalg.eigvalsh(A.astype(float)).min())
    R = math.ceil(math.sqrt(2 * nmax / lam))
    rng = np.arange(-R, R + 1)
    grid = np.array(list(itertools.product(rng, repeat=form.r)), dtype=np.int64)
    q = np.einsum("ij,jk,ik->i", grid, A, grid) // 2
    out = {n: [] for n in range(nmax + 1)}
    for m, v in zip(grid[q <= nmax], q[q <= nmax]):
        out[int(v)].append(tuple(int(x) for x in m))
    return {n: sorted(v) for n, v in out.items()}


def jacobi_r4(n):
    if n == 0:
        return 1
    return 8 * sum(d for d in range(1, n + 1) if n % d == 0 and d % 4)
