import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubesect import critical as cr
from cubesect.acceptance import XI_VALUES
from cubesect.box_density import section_volume
from cubesect.errors import NoSignChange


def test_b_of_examples():
    assert cr.b_of(4, 2, 0.5) == 0.5
    assert cr.b_of(4, 2, 1 / math.sqrt(2)) == 0
    assert cr.b_of(6, 2, 0.6) == pytest.approx(math.sqrt(0.28 / 4), rel=1e-15)
    with pytest.raises(ValueError):
        cr.b_of(4, 2, 0.3)
    with pytest.raises(ValueError):
        cr.b_of(4, 3, 0.5)
    with pytest.raises(ValueError):
        cr.b_of(3, 1, 0.6)


@given(st.integers(4, 20), st.data())
def test_two_level_vectors_are_unit(n, data):
    k = data.draw(st.integers(2, n - 2))
    a = data.draw(st.floats(1 / math.sqrt(n), 1 / math.sqrt(k)))
    v = cr.two_level(n, k, a).vector
    assert len(v) == n
    assert abs(np.linalg.norm(v) - 1) <= 1e-14


@pytest.mark.parametrize("n,k", [(4, 2), (5, 2), (6, 3), (8, 4), (10, 7)])
def test_F_vanishes_on_the_diagonal(n, k):
    assert abs(cr.F(n, k, 1 / math.sqrt(n))) <= 1e-10


def test_F_examples():
    assert abs(cr.F(4, 2, math.sqrt(2 / 5))) <= 1e-10
    assert cr.F(6, 2, 0.5) < 0
    assert abs(cr.F(8, 4, 0.5)) <= 1e-10  # right end of I_4, where b = 0
    with pytest.raises(ValueError):
        cr.F(6, 2, 1 / math.sqrt(2))


def test_F_prime_at_diag():
    assert cr.F_prime_at_diag(4, 2) == Fraction(-16, 9)
    for n in range(4, 61):
        assert cr.F_prime_at_diag(n, 2) < 0


@pytest.mark.parametrize("n,k", [(5, 2), (6, 2), (7, 3)])
def test_F_prime_against_one_sided_difference(n, k):
    h = 1e-5
    a0 = 1 / math.sqrt(n)
    fd = (-3 * cr.F(n, k, a0) + 4 * cr.F(n, k, a0 + h) - cr.F(n, k, a0 + 2 * h)) / (2 * h)
    assert abs(fd - float(cr.F_prime_at_diag(n, k))) <= 1e-4 * max(1.0, abs(fd))


def test_gamma_threshold():
    assert cr.gamma_threshold(4) == pytest.approx(math.sqrt(2 / 5), rel=1e-15)
    assert cr.gamma_threshold(5) == pytest.approx(math.sqrt(3 / 7), rel=1e-15)
    with pytest.raises(ValueError):
        cr.gamma_threshold(3)


def test_closed_sections():
    assert cr.s1_closed(1 / math.sqrt(2)) == pytest.approx(0.5, rel=1e-15)
    n, a = 5, 0.69
    b = cr.b_of(n, 2, a)
    assert abs(cr.s1_closed(a) - section_volume([a, b, b, b], a / 2)) <= 1e-10
    assert abs(cr.s2_closed(n, a) - section_volume([a, a, b, b], b / 2)) <= 1e-10
    with pytest.raises(ValueError):
        cr.s2_closed(5, 0.6)


@pytest.mark.parametrize("n", range(4, 9))
def test_closed_form_matches_quadrature(n):
    for a in np.linspace(cr.gamma_threshold(n), 1 / math.sqrt(2) - 1e-3, 6):
        assert abs(cr.F_closed(n, a) - cr.F(n, 2, a)) <= 1e-8


@pytest.mark.parametrize("n,k", [(5, 2), (6, 3), (7, 2), (9, 4)])
def test_sections_route_matches_quadrature(n, k):
    lo, hi = 1 / math.sqrt(n), 1 / math.sqrt(k)
    for a in np.linspace(lo, hi, 7)[1:-1]:
        assert abs(cr.F_via_sections(n, k, a) - cr.F(n, k, a)) <= 1e-8


def test_lower_bound_endpoints():
    for n in range(4, 12):
        assert abs(cr.lemma3_lower_bound(n, 1 / math.sqrt(2))) <= 1e-15
        assert cr.lemma3_lower_bound(n, cr.gamma_threshold(n)) >= -1e-12


@pytest.mark.parametrize("n", range(5, 9))
def test_lower_bound_holds(n):
    for a in np.linspace(cr.gamma_threshold(n), 1 / math.sqrt(2) - 1e-4, 50):
        assert cr.F_closed(n, a) >= cr.lemma3_lower_bound(n, a) - 1e-8


@pytest.mark.parametrize("n", sorted(XI_VALUES))
def test_find_xi(n):
    res = cr.find_xi(n)
    assert abs(res.xi - XI_VALUES[n]) <= 1e-6
    lo, hi = res.bracket
    assert lo < res.xi < hi and hi - lo <= 1e-10
    assert abs(res.F_residual) <= 1e-8
    assert res.criticality_residual_max <= 1e-8
    if n == 4:
        assert abs(res.xi - math.sqrt(0.4)) <= 1e-9
    assert set(res.to_dict()) >= {"xi", "bracket", "F_residual", "iterations"}


def test_xi_increases_with_n():
    xs = [cr.find_xi(n, tol=1e-8).xi for n in range(4, 13)]
    assert all(a < b for a, b in zip(xs, xs[1:]))
    assert xs[-1] < 1 / math.sqrt(2)


def test_find_xi_rejects_bad_input():
    with pytest.raises(ValueError):
        cr.find_xi(3)
    with pytest.raises(ValueError):
        cr.find_xi(6, tol=1e-14)


def test_refine_handles_exact_zero():
    xi, lo, hi, _ = cr._refine(lambda x: x - 0.5, 0.0, 1.0, -0.5, 0.5, 1e-12)
    assert lo < xi < hi and abs(xi - 0.5) <= 1e-12


def test_no_sign_change_is_reported(monkeypatch):
    monkeypatch.setattr(cr, "_map_F", lambda n, k, grid, cfg, jobs: [1.0] * len(grid))
    with pytest.raises(NoSignChange):
        cr.find_xi(6)


def test_criticality_residual():
    d = np.full(6, 1 / math.sqrt(6))
    assert np.max(np.abs(cr.criticality_residual(d))) <= 1e-10
    with pytest.raises(ValueError):
        cr.criticality_residual([1.0, 0.0])
    with pytest.raises(ValueError):
        cr.criticality_residual([0.6, 0.6])
    off = cr.two_level(6, 2, 0.5).vector
    assert np.max(np.abs(cr.criticality_residual(off))) > 1e-3


def test_scan_sign_changes():
    rows = cr.scan_F(6, 2, samples=60)
    assert len(cr.sign_changes([f for _, f in rows])) == 1
    rows3 = cr.scan_F(6, 3, samples=40)
    assert cr.sign_changes([f for _, f in rows3]) == []
    assert rows3[-1][0] == pytest.approx(1 / math.sqrt(3) - cr.SCAN_STOP)


def test_scan_endpoints_vanish_for_large_k():
    rows = cr.scan_F(8, 4, samples=9)
    assert abs(rows[0][1]) <= 1e-10 and abs(rows[-1][1]) <= 1e-10


def test_scan_parallel_matches_serial():
    serial = cr.scan_F(7, 2, samples=16, jobs=1)
    parallel = cr.scan_F(7, 2, samples=16, jobs=2)
    assert serial == parallel


def test_scan_csv_format():
    text = cr.scan_csv([(0.5, -0.25), (0.6, 1e-20)])
    assert text == "a,F\n0.5,-0.25\n0.59999999999999998,9.9999999999999995e-21\n"


def test_default_jobs(monkeypatch):
    monkeypatch.setenv("CUBESECT_JOBS", "3")
    assert cr.default_jobs() == 3
    monkeypatch.delenv("CUBESECT_JOBS")
    assert cr.default_jobs() >= 1


@settings(max_examples=10, deadline=None)
@given(st.integers(5, 8), st.floats(0.05, 0.95))
def test_F_negative_between_diagonal_and_xi(n, t):
    xi = XI_VALUES[n]
    a = 1 / math.sqrt(n) + t * (xi - 1e-4 - 1 / math.sqrt(n))
    assert cr.F(n, 2, a) < 0
