import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ellip.lattice_enum import (
    RationalPoint,
    height_table,
    omega_count,
    omega_count_mobius,
    omega_cumulative,
    omega_points,
    omega_upto,
    rational_points,
    rep_count,
    representations,
)
from ellip.quadform import sphere
from conftest import all_forms, box_solutions, jacobi_r4


def test_representation_examples(s2):
    assert representations(s2, 0).tolist() == [[0, 0, 0]]
    assert len(representations(s2, 1)) == 6
    r9 = representations(s2, 9)
    assert len(r9) == 30
    shapes = {tuple(sorted(abs(v) for v in m)) for m in r9.tolist()}
    assert shapes == {(0, 0, 3), (1, 2, 2)}


def test_representations_sorted(nondiag):
    pts = representations(nondiag, 37).tolist()
    assert pts == sorted(pts)


def test_rep_count_examples(s3, nondiag):
    assert rep_count(s3, 1) == 8
    assert rep_count(s3, 9) == 104
    assert rep_count(s3, 0) == rep_count(nondiag, 0) == 1


def test_rep_count_jacobi(s3):
    for n in list(range(0, 300)) + [199**2, 2**10 * 3]:
        assert rep_count(s3, n) == jacobi_r4(n)


@pytest.mark.parametrize("name", list(all_forms()))
def test_box_search_oracle(name):
    f = all_forms()[name]
    oracle = box_solutions(f, 50)
    for n in range(51):
        got = [tuple(m) for m in representations(f, n).tolist()]
        assert got == oracle[n], (name, n)
        assert rep_count(f, n) == len(oracle[n])


def test_omega_examples(s2, s3):
    assert len(omega_points(s2, 1)) == 6
    assert len(omega_points(s2, 2)) == 0
    assert len(omega_points(s2, 3)) == 24
    assert omega_count_mobius(s2, 1) == 6
    assert omega_count_mobius(s2, 3) == 24
    assert omega_count_mobius(s3, 3) == 96 == omega_count(s3, 3)


def test_rational_point_invariants(nondiag):
    for n in range(1, 30):
        for p in rational_points(nondiag, n):
            assert p.check(nondiag)
            assert math.gcd(p.n, *p.m) == 1
    with pytest.raises(ValueError):
        RationalPoint((2, 0, 0), 2)


def test_cumulative_examples(s2, s3):
    assert omega_cumulative(s2, 1)[-1].cumulative == 6
    recs = omega_cumulative(s2, 3)
    assert [r.omega for r in recs] == [6, 0, 24] and recs[-1].cumulative == 30
    # oracle: every m with ||m||_inf <= 3, grouped by the reduced height
    box = box_solutions(s3, 9)
    brute = 0
    for n in range(1, 4):
        brute += sum(1 for m in box[n * n] if math.gcd(n, *m) == 1)
    assert omega_cumulative(s3, 3)[-1].cumulative == brute


def test_cumulative_invariants(nondiag):
    recs = omega_cumulative(nondiag, 60)
    assert all(r.omega <= r.rep_sq for r in recs)
    assert all(a.cumulative <= b.cumulative for a, b in zip(recs, recs[1:]))


@pytest.mark.parametrize("jobs", [2, 3, 8])
def test_parallel_matches_serial(s3, jobs):
    assert height_table(s3, 80, jobs=jobs) == height_table(s3, 80, jobs=1)


def test_jobs_from_environment(monkeypatch, s2):
    from ellip.lattice_enum import resolve_jobs

    monkeypatch.setenv("ELLIP_JOBS", "4")
    assert resolve_jobs() == 4
    monkeypatch.delenv("ELLIP_JOBS")
    assert resolve_jobs() == 1
    with pytest.raises(ValueError):
        resolve_jobs(0)


def test_omega_upto(s2):
    pts, hs = omega_upto(s2, 10)
    assert len(pts) == omega_cumulative(s2, 10)[-1].cumulative
    assert np.all(s2.evaluate(pts) == hs**2)


def test_large_values_exact():
    # r_3(n) for big n against a direct two-square decomposition count
    f = sphere(2)
    for n in (10**6 + 3, 3 * 10**6 + 2):
        brute = 0
        for x in range(-math.isqrt(n), math.isqrt(n) + 1):
            rest = n - x * x
            for y in range(-math.isqrt(rest), math.isqrt(rest) + 1):
                z2 = rest - y * y
                z = math.isqrt(z2)
                if z * z == z2:
                    brute += 1 if z == 0 else 2
        assert rep_count(f, n) == brute


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 400))
def test_partition_identity_random(n):
    f = sphere(2)
    assert rep_count(f, n * n) == sum(omega_count(f, n // d) for d in range(1, n + 1) if n % d == 0)
