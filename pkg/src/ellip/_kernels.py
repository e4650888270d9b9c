"""Numba kernels for Fincke-Pohst enumeration of Q(m) = target.

Outer coordinates are bounded with floating-point Cholesky data (widened by a
relative slack); the innermost coordinate is solved as an integer quadratic,
so every reported solution is exact.
"""

import math

import numpy as np
from numba import njit

SLACK = 1e-6
_FLOAT_EXACT = 2**50


@njit(cache=True, nogil=True)
def _gcd(a, b):
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


_SQ64 = np.zeros(64, dtype=np.bool_)
for _v in range(64):
    _SQ64[(_v * _v) % 64] = True


@njit(cache=True, nogil=True)
def _bounds(c, R, q):
    if R < 0.0:
        R = 0.0
    rad = math.sqrt(R / q)
    eps = SLACK * (1.0 + rad)
    return np.int64(math.ceil(c - rad - eps)), np.int64(math.floor(c + rad + eps))


@njit(cache=True, nogil=True)
def enumerate_solutions(A, qd, qo, target, height, collect):
    """Walk all integer m with Q(m) = target.

    Returns (count, primitive_count, points). ``primitive_count`` counts
    solutions with gcd(m_1, ..., m_r, height) = 1 (only when height > 0).
    ``points`` holds the solutions when ``collect`` is true, else is empty.
    """
    r = A.shape[0]
    cap = 1024 if collect else 1
    buf = np.zeros((cap, r), dtype=np.int64)
    count = 0
    prim = 0
    if target < 0:
        return count, prim, buf[:0]
    x = np.zeros(r, dtype=np.int64)
    hi = np.zeros(r, dtype=np.int64)
    cen = np.zeros(r)
    bud = np.zeros(r)
    P = np.zeros(r, dtype=np.int64)           # exact Q of the committed tail
    b = np.zeros((r, r), dtype=np.int64)      # b[i, k] = sum_{j > i} A[k, j] x_j

    top = r - 1
    cen[top] = 0.0
    bud[top] = float(target)
    P[top] = 0
    for k in range(r):
        b[top, k] = 0
    lo, h = _bounds(0.0, bud[top], qd[top])
    x[top] = lo
    hi[top] = h
    i = top
    while i < r:
        if x[i] > hi[i]:
            i += 1
            if i < r:
                x[i] += 1
            continue
        xi = x[i]
        # commit x_i: state for level i - 1
        j = i - 1
        P[j] = P[i] + (A[i, i] // 2) * xi * xi + xi * b[i, i]
        for k in range(i):
            b[j, k] = b[i, k] + A[k, i] * xi
        diff = xi - cen[i]
        bud[j] = bud[i] - qd[i] * diff * diff
        if j == 0:
            # only reached for r == 2, which validation excludes
            x[i] += 1
            continue
        c = 0.0
        for k in range(j + 1, r):
            c -= qo[j, k] * x[k]
        cen[j] = c
        lo, h = _bounds(c, bud[j], qd[j])
        if j == 1:
            if collect and count + 2 * (h - lo + 1) > cap:
                while count + 2 * (h - lo + 1) > cap:
                    cap *= 2
                nb = np.zeros((cap, r), dtype=np.int64)
                nb[:count] = buf[:count]
                buf = nb
            count, prim = _inner(A, x, P[1], b[1, 0], b[1, 1], lo, h,
                                 target, height, collect, count, prim, buf)
            x[i] += 1
            continue
        i = j
        x[i] = lo
        hi[i] = h
    if collect:
        return count, prim, buf[:count]
    return count, prim, buf[:0]


@njit(cache=True, nogil=True)
def _inner(A, x, P1, beta, gamma, lo, hi, target, height, collect, count, prim, buf):
    """Loop over x_1 in [lo, hi]; solve for x_0 exactly.

    With x_2.. fixed, Q = a0 x0^2 + (beta + alpha x1) x0 + P1 + a1 x1^2 + gamma x1,
    so the discriminant in x0 is a quadratic in x1, stepped by finite differences.
    ``buf`` must have room for 2 (hi - lo + 1) more rows.
    """
    r = A.shape[0]
    a0 = A[0, 0] // 2
    a1 = A[1, 1] // 2
    alpha = A[0, 1]
    c2 = alpha * alpha - 4 * a0 * a1
    c1 = 2 * alpha * beta - 4 * a0 * gamma
    c0 = beta * beta - 4 * a0 * (P1 - target)
    disc = (c2 * lo + c1) * lo + c0
    step = c2 * (2 * lo + 1) + c1
    den = 2 * a0
    for x1 in range(lo, hi + 1):
        if disc >= 0 and _SQ64[disc & 63]:
            s = np.int64(math.sqrt(float(disc)) + 0.5)
            if disc > _FLOAT_EXACT:
                while s * s > disc:
                    s -= 1
                while (s + 1) * (s + 1) <= disc:
                    s += 1
            if s * s == disc:
                bb = beta + alpha * x1
                nroots = 1 if s == 0 else 2
                for t in range(nroots):
                    num = -bb - s if t == 0 else -bb + s
                    if num % den == 0:
                        x[0] = num // den
                        x[1] = x1
                        count += 1
                        if height > 0:
                            g = height
                            for k in range(r):
                                g = _gcd(g, x[k])
                            if g == 1:
                                prim += 1
                        if collect:
                            for k in range(r):
                                buf[count - 1, k] = x[k]
        disc += step
        step += 2 * c2
    return count, prim

