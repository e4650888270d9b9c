"""Counting rational points on the 2-sphere by height.

Run: python notebooks/01_counting_points.py
"""
from fractions import Fraction

from ellip import omega_count, omega_count_mobius, omega_cumulative, rational_points, rep_count, sphere
from ellip.analysis import fit_power_law

S2 = sphere(2)

# Points of height 3 on x^2 + y^2 + z^2 = 1, written as m / n in lowest terms.
pts = rational_points(S2, 3)
print(f"{len(pts)} points of height 3, e.g.", [tuple(Fraction(c, p.n) for c in p.m) for p in pts[:3]])

# Two independent routes to |Omega_n| agree, and summing over divisors recovers r(n^2).
for n in (5, 12, 25):
    direct, mob = omega_count(S2, n), omega_count_mobius(S2, n)
    total = sum(omega_count(S2, n // d) for d in range(1, n + 1) if n % d == 0)
    print(f"n={n}: direct {direct}, Mobius {mob}, divisor sum {total} = r(n^2) {rep_count(S2, n * n)}")

# The cumulative count grows like T^d.
rows = {r.n: r.cumulative for r in omega_cumulative(S2, 400)}
fit = fit_power_law([(T, rows[T]) for T in range(50, 401, 50)])
print(f"N(T) ~ {fit.constant:.3f} T^{fit.exponent:.3f}")
