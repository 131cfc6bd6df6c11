import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from goldbach.arith import RationalPoint
from goldbach.expsum import (
    ScanTooLargeError,
    UnitPoint,
    delta_reduction_check,
    eval_delta,
    eval_S,
    eval_v,
    frac_mul,
    normalize_beta,
)
from goldbach.primes import make_window
from oracles import expsum_direct, geometric_direct


@pytest.fixture(scope="module")
def w10():
    return make_window(10, 10)


def test_S_at_zero_and_half(w10):
    assert eval_S(w10, 0.0) == pytest.approx(math.log(210), abs=1e-14)
    half = eval_S(w10, 0.5)
    expected = expsum_direct([2, 3, 5, 7], 0.5)
    assert half.real == pytest.approx(-3.96081316959758, abs=1e-12)
    assert abs(half - expected) < 1e-12
    assert eval_S(w10, 1.0) == eval_S(w10, 0.0)


def test_S_matches_direct_sum_and_tagged_form():
    w = make_window(10**5, 500)
    for a, q, beta in [(1, 3, 0.0), (2, 7, 1e-4), (5, 12, -3e-3)]:
        alpha = a / q + beta
        tagged = eval_S(w, UnitPoint.tagged(RationalPoint(a, q), beta))
        from fractions import Fraction

        exact = expsum_direct(w.primes.tolist(), Fraction(a, q) + Fraction(beta))
        assert abs(tagged - exact) < 1e-9
        assert abs(eval_S(w, alpha) - exact) < 1e-7


def test_frac_mul_large_multiplier():
    from fractions import Fraction

    n = np.array([10**9 + 7, 2**33 + 1])
    beta = 0.123456789123
    got = frac_mul(n, beta)
    want = [float((Fraction(beta) * int(k)) % 1) for k in n]
    assert np.allclose(got, want, rtol=0, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 10**6), st.integers(1, 2000), st.floats(-3, 3, allow_nan=False))
def test_conjugate_symmetry_periodicity_triangle(x, h, alpha):
    h = min(h, x)
    w = make_window(x, h)
    s = eval_S(w, alpha)
    assert abs(eval_S(w, -alpha) - s.conjugate()) <= 1e-9 * (1 + abs(s))
    assert abs(eval_S(w, alpha + 1.0) - s) <= 1e-9 * (1 + abs(s))
    assert abs(s) <= eval_S(w, 0.0).real + 1e-9


def test_v_examples():
    assert eval_v(20, 5, 0.0) == 5
    assert abs(eval_v(20, 4, 0.5)) < 1e-15
    big = eval_v(10**6, 10**3, 1e-7)
    ref = geometric_direct(10**6, 10**3, 1e-7)
    assert abs(big - ref) <= 1e-10 * abs(ref)


def test_v_closed_form_against_direct_sum():
    rng = random.Random(5)
    for _ in range(40):
        h = rng.randint(1, 10**4)
        x = rng.randint(h, 10**7)
        beta = rng.uniform(-0.5, 0.5)
        v = eval_v(x, h, beta)
        ref = geometric_direct(x, h, beta)
        assert abs(v - ref) <= 1e-9 * max(1.0, abs(ref))


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 10**4), st.integers(0, 10**6), st.floats(-5, 5, allow_nan=False))
def test_geometric_bound(h, extra, beta):
    v = abs(eval_v(h + extra, h, beta))
    b = abs(normalize_beta(beta))
    assert v <= h
    if b > 0:
        assert v <= 1 / (2 * b)


def test_delta_examples(w10):
    quarter = UnitPoint.tagged(RationalPoint(1, 4), 0.0)
    assert eval_delta(w10, RationalPoint(1, 4), 0.0) == eval_S(w10, quarter)
    d = eval_delta(w10, RationalPoint(1, 1), 0.0)
    assert d.real == pytest.approx(math.log(210) - 10, abs=1e-13)
    empty = make_window(10, 1)
    third = RationalPoint(1, 3)
    assert eval_delta(empty, third, 0.01) == pytest.approx(0.5 * eval_v(10, 1, 0.01), abs=1e-15)


def test_delta_reduction():
    w = make_window(10**4, 10**3)
    for center, beta in [(RationalPoint(1, 3), 1e-4), (RationalPoint(2, 5), -1e-4), (RationalPoint(1, 2), 0.0)]:
        rep = delta_reduction_check(w, center, beta)
        assert rep.ok, rep
        assert rep.rhs <= rep.rhs_partial_summation
    with pytest.raises(ScanTooLargeError):
        delta_reduction_check(make_window(10**6, 2 * 10**5), RationalPoint(1, 1), 0.0)


def test_delta_prefix_against_definition():
    from goldbach.expsum import _delta_prefix

    w = make_window(5000, 300)
    c = RationalPoint(3, 7)
    prefix = _delta_prefix(w, c)
    for t in (1, 17, 150, 300):
        sub = make_window(5000, t)
        assert prefix[t - 1] == pytest.approx(abs(eval_delta(sub, c, 0.0)), rel=1e-10, abs=1e-10)
