"""Harmonic polynomials for a quadratic form, zonal functions, and Weyl sums.

Run: python notebooks/03_harmonics_and_weyl.py
"""
import numpy as np

from ellip import ZonalSpec, dim_harmonic, harmonic_basis, sphere, validate_form, weyl_sum, zonal

S2 = sphere(2)
basis = harmonic_basis(S2, 2)
print(f"{len(basis)} harmonics of degree 2 (expected {dim_harmonic(2, 2)}):")
for P in basis:
    print("  ", P.as_dict())

# Weyl sums over Omega_n computed directly and through the Mobius/theta route.
# Many basis elements average to zero by the symmetry of the cube; pick one that does not.
P = next(Q for Q in harmonic_basis(S2, 4) if weyl_sum(S2, Q, 15)[0] != 0)
for n in (7, 15, 45):
    direct, mob = weyl_sum(S2, P, n)
    print(f"degree-4 Weyl sum at n={n}: {direct} (both routes agree: {direct == mob})")

# A non-diagonal form has its own harmonic space, of the same dimension.
Q = validate_form([[2, 1, 0], [1, 2, 0], [0, 0, 2]])
print("non-diagonal form, degree 3 basis size:", len(harmonic_basis(Q, 3)))

# Zonal functions peak at n(nu) on the diagonal.
spec = ZonalSpec(2, 6)
x = np.array([[0.0, 0.6, 0.8]])
print("Z_6(x, x) =", zonal(spec, x, x)[0], "= dim", dim_harmonic(2, 6))
