import math
import random
from fractions import Fraction

import numpy as np
import pytest

from cubesect import hessian as hs
from cubesect.acceptance import XI_VALUES
from cubesect.box_density import RadicalValue
from cubesect.critical import find_xi, two_level
from cubesect.errors import ConsistencyError
from cubesect.sinc_quad import beta_entry, gamma_entry, sigma_grad, sigma_num


def test_delta_hat_examples():
    assert hs.delta_hat(3) == 0
    assert hs.delta_hat(4) == -1
    assert hs.delta_hat(5) == Fraction(-1, 4)
    for n in range(3, 30):
        assert hs.beta_hat(n) - hs.gamma_hat(n) == hs.delta_hat(n)


def test_delta_certificate():
    assert hs.delta_negative_certificate(6).passed
    assert hs.delta_negative_certificate(7).passed
    rep = hs.delta_negative_certificate(6, 60)
    assert rep.passed and rep.checked == 55
    with pytest.raises(ValueError):
        hs.delta_negative_certificate(5)


def test_principal_minor_example():
    assert hs.principal_minor(3, 2, 1, 3) == 16
    assert hs.principal_minor(3, 2, 5, 1) == -32
    assert hs.principal_minor(4, 1, 2, 3) == -3
    for m in range(3, 9):
        assert hs.principal_minor(m, 1, 4, 4) == 0


def test_principal_minor_radical_alpha():
    alpha = RadicalValue(2, Fraction(1, 6))
    assert hs.principal_minor(4, alpha, Fraction(1, 2), Fraction(3, 2)) == -2


def test_closed_form_matches_determinant():
    rng = random.Random(17)
    for _ in range(100):
        m = rng.randint(3, 8)
        a, b, g = (Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3))
        closed = hs.principal_minor(m, a, b, g)
        mat = np.array(hs.pattern_matrix(m, float(a), float(b), float(g)))
        det = np.linalg.det(mat)
        assert abs(det - float(closed)) <= 1e-10 * max(1.0, abs(float(closed)), np.abs(mat).max() ** m)


def test_closed_form_float_inputs():
    rng = np.random.default_rng(4)
    for _ in range(50):
        m = int(rng.integers(3, 9))
        a, b, g = rng.normal(size=3)
        hs.principal_minor(m, a, b, g)  # raises on mismatch


def test_mismatch_raises(monkeypatch):
    monkeypatch.setattr(hs, "_det_exact", lambda rows: Fraction(12345))
    with pytest.raises(ConsistencyError):
        hs.principal_minor(4, 1, 2, 3)


def test_local_max_verdicts():
    three = hs.local_max_certificate(3)
    assert three.verdict == "inconclusive" and three.delta_hat == 0
    four = hs.local_max_certificate(4)
    assert four.verdict == "strict-local-max" and four.minor_signs == [1, 1]
    big = hs.local_max_certificate(30)
    assert big.verdict == "strict-local-max" and len(big.minor_signs) == 28
    assert set(big.to_dict()) == {"n", "alpha", "delta_hat", "minor_signs", "verdict"}


@pytest.mark.parametrize("n", range(4, 11))
def test_hats_match_quadrature_sign(n):
    d = np.full(n, 1 / math.sqrt(n))
    gap = beta_entry(d, 0) - gamma_entry(d, 0, 1)
    assert abs(gap - hs.diag_prefactor(n) * float(hs.delta_hat(n))) <= 1e-8
    assert (gap < 0) == (hs.delta_hat(n) < 0)


@pytest.mark.parametrize("n", range(3, 9))
def test_diagonal_is_critical(n):
    d = np.full(n, 1 / math.sqrt(n))
    g = sigma_grad(d)
    assert np.max(np.abs(g - np.dot(g, d) * d)) <= 1e-12


@pytest.fixture(scope="module")
def xis():
    return {n: find_xi(n, tol=1e-10).xi for n in XI_VALUES}


@pytest.mark.parametrize("n", sorted(XI_VALUES))
def test_saddle_gap_negative(n, xis):
    paths = hs.saddle_gap_paths(n, xis[n])
    assert paths["identity"] < 0
    assert paths["difference"] <= 1e-6
    assert hs.saddle_gap(n, xis[n]) == paths["identity"]


def test_saddle_quadratic_form(xis):
    n = 6
    w = two_level(n, 2, xis[n]).vector
    H = np.array([[beta_entry(w, i) if i == j else gamma_entry(w, i, j) for j in range(n)] for i in range(n)])
    q = np.zeros(n)
    q[0], q[1] = 1, -1
    assert abs(q @ H @ q - 2 * hs.saddle_gap(n, xis[n])) <= 1e-8


def test_saddle_gap_disagreement_raises(monkeypatch):
    monkeypatch.setattr(hs, "beta_entry", lambda w, k, cfg: 1e3)
    with pytest.raises(ConsistencyError):
        hs.saddle_gap(6, XI_VALUES[6])


@pytest.mark.parametrize("n", sorted(XI_VALUES))
def test_saddle_upper_bound(n, xis):
    assert abs(hs.saddle_upper_bound(n, 1 / math.sqrt(n))) <= 1e-12
    ub = hs.saddle_upper_bound(n, xis[n])
    assert ub < 0
    assert hs.saddle_gap(n, xis[n]) <= ub + 1e-6


def test_saddle_inputs_validated():
    with pytest.raises(ValueError):
        hs.saddle_gap_paths(6, 0.3)
    with pytest.raises(ValueError):
        hs.saddle_upper_bound(3, 0.6)


def test_identity_route_uses_exact_section():
    # sigma(w) on the diagonal of two fewer coordinates enters as an exact value
    n, xi = 5, 0.62
    w = two_level(n, 2, xi).vector
    assert abs(np.linalg.norm(w) - 1) <= 1e-15
    p = hs.saddle_gap_paths(n, xi)
    assert p["difference"] <= 1e-8
    assert sigma_num(w) > 0
