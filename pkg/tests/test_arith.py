import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from goldbach.arith import RationalPoint, arith_tables, factorize, mobius, reduce, totient
from oracles import mobius_factor, totient_gcd


@pytest.mark.parametrize("n, expected", [(1, 1), (4, 0), (6, 1), (30, -1), (2, -1)])
def test_mobius_examples(n, expected):
    assert mobius(n) == expected
    assert mobius_factor(n) == expected


@pytest.mark.parametrize("n, expected", [(1, 1), (7, 6), (12, 4)])
def test_totient_examples(n, expected):
    assert totient(n) == expected
    assert totient_gcd(n) == expected


@pytest.mark.parametrize("a, q, expected", [(2, 4, (1, 2)), (7, 3, (1, 3)), (5, 5, (1, 1)), (-1, 4, (3, 4))])
def test_reduce(a, q, expected):
    r = reduce(a, q)
    assert (r.a, r.q) == expected
    assert (r.value - Fraction(a, q)).denominator == 1


def test_rational_point_rejects_bad_fractions():
    with pytest.raises(ValueError):
        RationalPoint(2, 4)
    with pytest.raises(ValueError):
        RationalPoint(0, 3)
    with pytest.raises(ValueError):
        reduce(1, 0)


def test_tables_match_single_argument_routes():
    mu, phi = arith_tables(2000)
    for n in range(1, 2001):
        assert mu[n] == mobius(n) == mobius_factor(n)
        assert phi[n] == totient(n)


@given(st.integers(1, 10**5), st.integers(1, 10**5))
def test_multiplicativity(m, n):
    if math.gcd(m, n) != 1:
        return
    assert mobius(m * n) == mobius(m) * mobius(n)
    assert totient(m * n) == totient(m) * totient(n)


def test_totient_bounds_to_one_million():
    _, phi = arith_tables(10**6)
    q = np.arange(1, 10**6 + 1)
    vals = phi[1:]
    assert np.all(vals <= q)
    assert np.all(vals.astype(float) ** 2 >= q / 2)  # phi(q) >= sqrt(q/2)


def test_mobius_divisor_sum():
    mu, _ = arith_tables(10**4)
    sums = np.zeros(10**4 + 1, dtype=np.int64)
    for d in range(1, 10**4 + 1):
        sums[d::d] += mu[d]
    assert sums[1] == 1
    assert not sums[2:].any()


def test_factorize_64bit_semiprime():
    n = 1_000_003 * 999_983
    assert factorize(n) == {999_983: 1, 1_000_003: 1}
    assert totient(n) == 999_982 * 1_000_002
    assert mobius(n * 4) == 0
    assert mobius(n) == 1
