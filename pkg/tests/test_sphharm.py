import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ellip.analysis import fit_power_law
from ellip.errors import GridTooCoarse
from ellip.lattice_enum import representations
from ellip.quadform import sphere, validate_form
from ellip.sphharm import (
    HarmonicPoly,
    ZonalSpec,
    dim_harmonic,
    gegenbauer,
    harmonic_basis,
    spectral_project,
    theta_coeff,
    weyl_sum,
    zonal,
)
from conftest import all_forms

X1Y1 = HarmonicPoly.from_dict({(1, 1, 0): 1})
X2_Y2 = HarmonicPoly.from_dict({(2, 0, 0): 1, (0, 2, 0): -1})


def test_dim_examples():
    assert dim_harmonic(2, 0) == 1
    assert dim_harmonic(2, 2) == 5
    assert dim_harmonic(3, 2) == 9
    assert dim_harmonic(2, 1) == 3  # binomial value d + 1
    assert all(dim_harmonic(2, n) == 2 * n + 1 for n in range(30))


def test_gegenbauer_examples():
    assert gegenbauer(0, 1.5, 0.3) == 1
    assert gegenbauer(1, 1.5, 0.3) == pytest.approx(2 * 1.5 * 0.3)
    assert gegenbauer(2, 0.5, 1.0) == pytest.approx(1.0)


def test_gegenbauer_against_scipy():
    from scipy.special import eval_gegenbauer

    t = np.linspace(-1, 1, 41)
    for lam in (0.5, 1.0, 1.5, 2.5):
        for nu in range(0, 21):
            assert np.allclose(gegenbauer(nu, lam, t), eval_gegenbauer(nu, lam, t), rtol=1e-10, atol=1e-10)


def test_zonal_examples():
    e1, e2 = np.eye(3)[0], np.eye(3)[1]
    for nu in range(8):
        assert zonal(ZonalSpec(2, nu), e1, e1) == pytest.approx(dim_harmonic(2, nu))
    assert zonal(ZonalSpec(2, 0), e1, e2) == pytest.approx(1.0)
    assert zonal(ZonalSpec(2, 1), e1, e2) == pytest.approx(0.0, abs=1e-15)
    assert ZonalSpec(4, 3).lam == 1.5
    with pytest.raises(ValueError):
        zonal(ZonalSpec(2, 1), 2 * e1, e2)


def _random_units(rng, n, dim):
    v = rng.standard_normal((n, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_zonal_bounds(d):
    rng = np.random.default_rng(d)
    x, y = _random_units(rng, 1000, d + 1), _random_units(rng, 1000, d + 1)
    for nu in range(21):
        spec = ZonalSpec(d, nu)
        n = dim_harmonic(d, nu)
        assert np.all(np.abs(zonal(spec, x, y)) <= n + 1e-9)
        assert np.allclose(zonal(spec, x, x), n, atol=1e-9)


def test_zonal_addition_theorem_s2():
    # Z_nu(x, y) = sum_k Y_k(x) Y_k(y) with a real orthonormal basis built from scipy's sph_harm
    from scipy.special import sph_harm_y

    rng = np.random.default_rng(7)
    x, y = _random_units(rng, 50, 3), _random_units(rng, 50, 3)

    def angles(v):
        return np.arctan2(v[:, 1], v[:, 0]) % (2 * np.pi), np.arccos(np.clip(v[:, 2], -1, 1))

    for nu in range(6):
        (ax, px), (ay, py) = angles(x), angles(y)
        total = sum(sph_harm_y(nu, m, px, ax) * np.conj(sph_harm_y(nu, m, py, ay)) for m in range(-nu, nu + 1))
        # normalized measure: multiply the L^2(dA) kernel by 4 pi
        assert np.allclose(4 * np.pi * total.real, zonal(ZonalSpec(2, nu), x, y), atol=1e-10)


def test_harmonic_basis_examples(s2):
    (const,) = harmonic_basis(s2, 0)
    assert const.as_dict() == {(0, 0, 0): 1}
    lin = harmonic_basis(s2, 1)
    assert {tuple(p.as_dict().items()) for p in lin} == {(((1, 0, 0), 1),), (((0, 1, 0), 1),), (((0, 0, 1), 1),)}
    quad = harmonic_basis(s2, 2)
    assert len(quad) == 5
    assert X2_Y2.is_harmonic(s2) and X1Y1.is_harmonic(s2)
    assert not HarmonicPoly.from_dict({(2, 0, 0): 1}).is_harmonic(s2)


@pytest.mark.parametrize("r", [3, 4, 5])
def test_harmonic_basis_dimension_and_exactness(r):
    f = sphere(r - 1)
    for nu in range(6):
        basis = harmonic_basis(f, nu)
        assert len(basis) == dim_harmonic(r - 1, nu)
        assert all(p.is_harmonic(f) for p in basis)
        assert all(p.degree == nu for p in basis)


@pytest.mark.parametrize("name", list(all_forms()))
def test_harmonic_basis_other_forms(name):
    f = all_forms()[name]
    for nu in range(5):
        basis = harmonic_basis(f, nu)
        assert len(basis) == dim_harmonic(f.d, nu)
        assert all(p.is_harmonic(f) for p in basis)
        # linear independence over Q via rank of the coefficient matrix
        keys = sorted({k for p in basis for k, _ in p.terms})
        mat = np.array([[float(p.as_dict().get(k, 0)) for k in keys] for p in basis])
        assert np.linalg.matrix_rank(mat) == len(basis)


def test_theta_examples(s2, nondiag):
    one = HarmonicPoly.constant(3)
    for n in range(30):
        assert theta_coeff(s2, one, n) == len(representations(s2, n))
    assert theta_coeff(s2, X2_Y2, 1) == 0
    for P in harmonic_basis(nondiag, 3) + harmonic_basis(s2, 1):
        for n in range(1, 25):
            assert theta_coeff(nondiag, P, n) == 0


def test_theta_against_direct_fraction_sum(nondiag):
    for P in harmonic_basis(nondiag, 2):
        for n in (5, 12, 31):
            assert theta_coeff(nondiag, P, n) == sum(P(m) for m in representations(nondiag, n).tolist())


def test_weyl_examples(s2):
    from ellip.lattice_enum import omega_count

    one = HarmonicPoly.constant(3)
    for n in range(1, 20):
        assert weyl_sum(s2, one, n) == (omega_count(s2, n), omega_count(s2, n))
    assert weyl_sum(s2, X1Y1, 1) == (0, 0)
    direct, mob = weyl_sum(s2, X2_Y2, 5)
    assert direct == mob and isinstance(direct, Fraction)


@pytest.mark.parametrize("name", ["sphere2", "nondiag"])
def test_weyl_dual_all_degrees(name):
    f = all_forms()[name]
    for nu in range(0, 4):
        for P in harmonic_basis(f, nu):
            for n in range(1, 101):
                weyl_sum(f, P, n)  # raises on mismatch


def test_weyl_mismatch_would_be_detected(s2):
    # a non-harmonic polynomial still satisfies the identity (it is a pure Mobius inversion),
    # so the check itself is algebraic and not vacuous
    P = HarmonicPoly.from_dict({(2, 0, 0): 1, (0, 1, 1): 3})
    for n in range(1, 30):
        d, m = weyl_sum(s2, P, n)
        assert d == m


def _weyl_slope(form, nu):
    fits = []
    for P in harmonic_basis(form, nu):
        pairs = [(n, abs(float(weyl_sum(form, P, n)[0]))) for n in range(1, 201, 2)]
        pairs = [p for p in pairs if p[1] > 0]
        if len(pairs) >= 5:
            fits.append(fit_power_law(pairs).exponent)
    return fits


def test_weyl_growth_sphere_degree2_vanishes(s2):
    # symmetry under signed coordinate permutations kills every degree-2 harmonic sum
    assert _weyl_slope(s2, 2) == []
    for P in harmonic_basis(s2, 2):
        assert all(weyl_sum(s2, P, n)[0] == 0 for n in range(1, 201, 2))


def test_weyl_growth_bound(s2, nondiag):
    bound = (2 - 1) / 2 + 0.25
    for form, nu in [(s2, 4), (nondiag, 2)]:
        slopes = _weyl_slope(form, nu)
        assert slopes and max(slopes) <= bound, slopes


def test_polynomial_helpers():
    P = HarmonicPoly.from_dict({(2, 0, 0): Fraction(1, 2), (0, 1, 1): -3})
    assert P(( 2, 1, 1)) == Fraction(2) - 3
    L, ints = P.integer_form()
    assert L == 2 and dict(ints) == {(2, 0, 0): 1, (0, 1, 1): -6}
    assert P.evaluate(np.array([[2.0, 1.0, 1.0]]))[0] == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        HarmonicPoly.from_dict({(2, 0, 0): 1, (1, 0, 0): 1})


def test_sum_over_large_values_uses_big_ints(s2):
    P = HarmonicPoly.from_dict({(8, 0, 0): 1, (0, 8, 0): -1})
    pts = np.array([[40_000, 1, 0], [3, 2, 1]])
    assert P.sum_over(pts) == (40_000**8 - 1) + (3**8 - 2**8)


# ---------------------------------------------------------------- spectral projection

S2 = sphere(2)


def test_projection_reproduces_and_annihilates():
    for nu in (0, 1, 2, 4, 7):
        for Y in harmonic_basis(S2, nu)[:3]:
            same = spectral_project(lambda y: Y.evaluate(y), nu)
            assert np.max(np.abs(same.values - Y.evaluate(same.test_points))) < 1e-6
            for mu in {max(nu - 1, 0), nu + 1, nu + 2} - {nu}:
                other = spectral_project(lambda y: Y.evaluate(y), mu)
                assert other.sup_norm < 1e-6


def test_projection_grid_too_coarse():
    with pytest.raises(GridTooCoarse):
        spectral_project(lambda y: y[:, 2], 12, n_theta=4, n_phi=6)


def test_projection_exp_matches_closed_form():
    # F = exp(x3): F_nu = (2 nu + 1) i_nu(1) P_nu(x3), sup at the poles
    for nu in range(0, 21, 4):
        got = spectral_project(None, nu, precision="double-double", F_mp=lambda y: mpmath.exp(y[2]))
        exact = (2 * nu + 1) * float(mpmath.sqrt(mpmath.pi / 2) * mpmath.besseli(nu + 0.5, 1))
        assert got.sup_norm == pytest.approx(exact, rel=1e-6)


def test_projection_precision_argument():
    with pytest.raises(ValueError):
        spectral_project(lambda y: y[:, 0], 1, precision="quad")
    with pytest.raises(ValueError):
        spectral_project(None, 1, precision="double-double")
