import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubesect.box_density import (
    RadicalValue,
    WeightVector,
    abs_moment,
    cdf,
    density,
    section_volume,
    sigma_exact,
    j_oracle,
)
from cubesect.laplace_polya import j_explicit

from oracles import convolution_density, irwin_hall_abs_moment

rationals = st.fractions(min_value=Fraction(1, 8), max_value=8, max_denominator=9)


def test_density_examples():
    assert density([1, 1], 0) == Fraction(1, 2)
    assert density([1], 0) == Fraction(1, 2)
    # frozen from the convolution oracle
    assert density([1, 1, 2, 2], 0) == Fraction(5, 24)


def test_single_weight_knots_rejected():
    with pytest.raises(ValueError):
        density([1], 1)
    assert density([2], 3) == 0


def test_weights_must_be_positive():
    with pytest.raises(ValueError):
        WeightVector([1, 0])
    with pytest.raises(ValueError):
        WeightVector([])


@pytest.mark.parametrize("n", range(1, 7))
def test_density_against_convolution(n):
    rng = random.Random(n)
    for _ in range(3):
        v = [Fraction(rng.randint(1, 7), rng.randint(1, 4)) for _ in range(n)]
        f = convolution_density(v)
        total = sum(v)
        for i in range(-12, 13):
            r = total * Fraction(i, 11)
            if n == 1 and abs(r) == v[0]:
                continue
            assert density(v, r) == f(r)


@pytest.mark.parametrize("n", range(1, 11))
def test_density_integrates_to_one(n):
    rng = random.Random(100 + n)
    v = [Fraction(rng.randint(1, 9), rng.randint(1, 5)) for _ in range(n)]
    assert cdf(v, sum(v)) == 1
    # exact antiderivative evaluated at the support end, not the clamp
    from cubesect.box_density import _exact_power_sum

    den = 2**n * math.factorial(n) * math.prod(v)
    assert _exact_power_sum(v, 2 * sum(v), n) / den == 1
    assert cdf(v, 0) == Fraction(1, 2)


@settings(max_examples=60, deadline=None)
@given(st.lists(rationals, min_size=2, max_size=7), st.fractions(min_value=-10, max_value=10, max_denominator=7))
def test_density_even_and_permutation_invariant(v, r):
    assert density(v, r) == density(v, -r)
    assert density(list(reversed(v)), r) == density(v, r)
    assert density(v, r) >= 0


@pytest.mark.parametrize("n", range(2, 13))
def test_float_mode_matches_exact(n):
    rng = random.Random(7 * n)
    for _ in range(5):
        v = [Fraction(rng.randint(1, 9), rng.randint(1, 5)) for _ in range(n)]
        r = Fraction(rng.randint(-30, 30), 7)
        exact = density(v, r)
        num = density([float(x) for x in v], float(r))
        if exact == 0:
            assert num == 0
        else:
            assert abs(num - float(exact)) <= 1e-9 * float(exact)


def test_radical_canonical_form():
    assert RadicalValue(1, 8) == RadicalValue(2, 2)
    assert RadicalValue(1, Fraction(1, 2)) == RadicalValue(Fraction(1, 2), 2)
    assert RadicalValue(3, 0) == RadicalValue(0, 5)
    r = RadicalValue(Fraction(2, 3), 4 * 49 * 3)
    assert r.coeff == Fraction(28, 3) and r.radicand == 3
    assert float(RadicalValue(1, 2)) == pytest.approx(math.sqrt(2), rel=1e-16)
    assert RadicalValue(2, 3).to_dict() == {"coeff": Fraction(2), "radicand": Fraction(3)}
    with pytest.raises(ValueError):
        RadicalValue(1, -1)


@given(st.integers(1, 10**9))
def test_square_extraction_property(k):
    r = RadicalValue(1, k)
    assert r.coeff**2 * r.radicand == k
    f = int(r.radicand)
    assert all(f % (p * p) for p in range(2, 1000))


def test_section_volume_examples():
    assert section_volume([1, 1], 0) == RadicalValue(1, 2)
    assert sigma_exact([1]) == RadicalValue(1)
    assert sigma_exact([1, 0, 0]) == RadicalValue(1)
    assert sigma_exact([1, 1, 1, 1]) == RadicalValue(Fraction(4, 3))


@pytest.mark.parametrize("n", range(2, 13))
def test_section_of_main_diagonal(n):
    for r in range(0, n):
        assert section_volume([1] * n, Fraction(r, 2)) == RadicalValue(j_explicit(n, r), n)


def test_sigma_scaling_invariance():
    base = sigma_exact([1, 1, 1, 1])
    for c in (Fraction(1, 3), 2, 17):
        assert sigma_exact([c] * 4) == base
    assert sigma_exact([2, 2, 1, 1]) == sigma_exact([1, 1, Fraction(1, 2), Fraction(1, 2)])


def test_sigma_at_two_level_direction():
    # (2,2,1,1) is parallel to the critical two-level direction for n = 4
    s = sigma_exact([2, 2, 1, 1])
    assert s == RadicalValue(Fraction(5, 12), 10)


def test_abs_moment_examples():
    assert abs_moment(0, Fraction(-2, 3)) == Fraction(2, 3)
    assert abs_moment(1, Fraction(1, 2)) == Fraction(1, 2)
    for m in range(0, 10):
        assert abs_moment(m, Fraction(1, 2)) >= Fraction(1, 2)


@pytest.mark.parametrize("m", range(0, 10))
def test_abs_moment_against_irwin_hall(m):
    for i in range(-25, 26):
        c = Fraction(i, 6)
        assert abs_moment(m, c) == irwin_hall_abs_moment(m, c)


def test_j_oracle():
    assert j_oracle(4, 0) == Fraction(2, 3)
    assert j_oracle(6, 6) == 0
    for n in range(2, 13):
        for r in range(0, n + 1):
            assert j_oracle(n, r) == j_explicit(n, r)


def test_float_limit():
    with pytest.raises(ValueError):
        density([1.0] * 25, 0.0)


@pytest.mark.parametrize("n", [14, 18])
def test_float_mode_accurate_near_support_edge(n):
    rng = random.Random(n)
    v = [Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(n)]
    total = sum(v)
    for frac in (Fraction(7, 10), Fraction(9, 10), Fraction(99, 100)):
        r = total * frac
        exact = density(v, r)
        num = density([float(x) for x in v], float(r))
        assert abs(num - float(exact)) <= 1e-9 * float(exact)
        c = cdf([float(x) for x in v], float(r))
        assert abs(c - float(cdf(v, r))) <= 1e-12
