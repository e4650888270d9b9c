"""Dirichlet series of twisted divisor sums and the identities they satisfy.

Run: python notebooks/02_dirichlet_identities.py
"""
from ellip.arith import DivisorSumSpec, character_group, kronecker_character, principal_character, sigma_twisted
from ellip.dseries import verify_delta_identity, verify_ramanujan, verify_square_identity

P1, chi4 = principal_character(1), character_group(4)[1]
print("sigma_1(chi4, 1; n) for n = 1..10:",
      [sigma_twisted(DivisorSumSpec(1, chi4, P1), n) for n in range(1, 11)])

# Coefficientwise checks up to M, exact when the characters are real.
for rep in (verify_ramanujan(2, 1, P1, P1, 500),
            verify_square_identity(1, chi4, kronecker_character(5), 500)):
    print(rep.identity, rep.mode, "max deviation", rep.max_deviation)

# Identities involving shifted arguments are sampled at points in the half-plane of convergence.
rep = verify_delta_identity(1, P1, P1, 2, M=2000)
print(rep.identity, rep.mode, f"max relative deviation {rep.max_deviation:.2e}")
