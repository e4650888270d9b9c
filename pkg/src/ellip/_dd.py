"""Vectorized double-double arithmetic (about 32 significant digits).

A value is a pair ``(hi, lo)`` of float64 arrays with |lo| <= ulp(hi)/2.
Only the handful of operations needed by the spectral projection live here.
"""

import numpy as np
import mpmath

_SPLIT = 134217729.0  # 2^27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    c = _SPLIT * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def add(x, y):
    s, e = two_sum(x[0], y[0])
    e = e + x[1] + y[1]
    return quick_two_sum(s, e)


def sub(x, y):
    return add(x, (-y[0], -y[1]))


def mul(x, y):
    p, e = two_prod(x[0], y[0])
    e = e + x[0] * y[1] + x[1] * y[0]
    return quick_two_sum(p, e)


def mul_scalar(x, b):
    """x * b for a float64 (array) b."""
    p, e = two_prod(x[0], b)
    e = e + x[1] * b
    return quick_two_sum(p, e)


def div_scalar(x, b):
    q1 = x[0] / b
    p, e = two_prod(q1, b)
    r = sub(x, quick_two_sum(p, e))
    q2 = r[0] / b
    return quick_two_sum(q1, q2)


def tree_sum(x, axis=-1):
    """Pairwise double-double reduction along ``axis``."""
    hi = np.moveaxis(np.asarray(x[0]), axis, -1)
    lo = np.moveaxis(np.asarray(x[1]), axis, -1)
    while hi.shape[-1] > 1:
        if hi.shape[-1] % 2:
            pad = [(0, 0)] * (hi.ndim - 1) + [(0, 1)]
            hi, lo = np.pad(hi, pad), np.pad(lo, pad)
        hi, lo = add((hi[..., 0::2], lo[..., 0::2]), (hi[..., 1::2], lo[..., 1::2]))
    return hi[..., 0], lo[..., 0]


def from_mp(values):
    """Split mpmath numbers into (hi, lo) float64 arrays."""
    hi = np.array([float(v) for v in values])
    lo = np.array([float(v - mpmath.mpf(h)) for v, h in zip(values, hi)])
    return hi, lo


def to_float(x):
    return x[0] + x[1]
