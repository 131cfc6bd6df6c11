import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from goldbach.arith import arith_tables
from goldbach.singular import (
    ramanujan_f,
    ramanujan_f_table,
    singular_euler,
    singular_truncated,
    truncation_decay_scan,
)
from oracles import ramanujan_direct


@pytest.mark.parametrize("q, N, expected", [(1, 12345, 1), (3, 6, 2), (3, 7, -1), (4, 1, 0)])
def test_ramanujan_examples(q, N, expected):
    assert ramanujan_f(q, N) == expected
    assert ramanujan_direct(q, N) == expected


def test_closed_form_matches_direct_sum():
    rng = random.Random(8)
    Ns = [rng.getrandbits(64) for _ in range(3)] + [720720, 1]
    for N in Ns:
        table = ramanujan_f_table(2000, N)
        for q in list(range(1, 200)) + rng.sample(range(200, 2001), 25):
            direct = ramanujan_direct(q, N)
            assert ramanujan_f(q, N) == direct
            assert table[q] == direct


@given(st.integers(1, 1000), st.integers(1, 1000), st.integers(-10**12, 10**12))
def test_f_multiplicative(q, r, N):
    if math.gcd(q, r) != 1:
        return
    assert ramanujan_f(q * r, N) == ramanujan_f(q, N) * ramanujan_f(r, N)


def test_truncated_examples():
    assert singular_truncated(17, 1).value == 1.0
    assert singular_truncated(21, 2).value == 2.0
    assert singular_truncated(21, 2).route == "truncated_series"
    assert abs(singular_truncated(10**5 + 4, 10**4).value) < 1e-6


def test_squarefree_support():
    N, P = 1155, 3000
    mu, phi = arith_tables(P)
    full = math.fsum(mu[q] * ramanujan_f(q, N) / phi[q] ** 3 for q in range(1, P + 1))
    assert singular_truncated(N, P).value == pytest.approx(full, abs=1e-15)


def test_euler_examples():
    even = singular_euler(4, 1000)
    assert even.value == 0.0 and even.route == "euler_product"
    odd = singular_euler(21, 10**6)
    assert odd.value > 0.5
    assert odd.tail_bound < 1e-9
    assert abs(odd.value - singular_truncated(21, 10**5).value) < 1e-3
    with pytest.raises(ValueError):
        singular_euler(21, 1)


def test_euler_forces_large_prime_factors():
    N = 3 * 1_000_003
    small = singular_euler(N, 100)
    manual = math.prod(
        (1 - 1 / (p - 1) ** 2) if N % p == 0 else (1 + 1 / (p - 1) ** 3)
        for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
    ) * (1 - 1 / 1_000_002**2)
    assert small.value == pytest.approx(manual, rel=1e-13)


def test_euler_tail_bound_brackets_finer_product():
    coarse = singular_euler(10**5 + 3, 1000)
    fine = singular_euler(10**5 + 3, 10**6)
    assert coarse.value <= fine.value <= coarse.value + coarse.tail_bound


def test_decay_scan_examples():
    scan = truncation_decay_scan(10**5 + 3, [10**2, 10**3, 10**4])
    assert scan.errors[0] > scan.errors[1] > scan.errors[2]
    assert scan.slope <= -0.8
    even = truncation_decay_scan(10**5 + 4, [10**2, 10**3, 10**4])
    assert even.reference.value == 0.0
    assert even.errors[0] > even.errors[1] > even.errors[2]


def test_cross_route_convergence_is_monotone():
    rng = np.random.default_rng(9)
    for N in rng.integers(5 * 10**3, 5 * 10**5, size=20) * 2 + 1:
        ref = singular_euler(int(N), 10**7).value
        errs = [abs(singular_truncated(int(N), P).value - ref) for P in (10, 10**2, 10**3, 10**4)]
        assert all(a > b for a, b in zip(errs, errs[1:])), (N, errs)


def test_parity():
    for N in range(1, 400):
        v = singular_euler(N, 1000).value
        if N % 2 == 0:
            assert v == 0.0
        else:
            assert v > 0.5
