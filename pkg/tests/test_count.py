import math

import pytest

from goldbach.count import (
    OracleScaleError,
    Params,
    ZeroCountError,
    brute_force_reps,
    count_reps,
    weighted_ratio,
)
from goldbach.primes import ParameterOrderError
from oracles import is_prime_td

LOG_7_11_3 = math.log(7) * math.log(11) * math.log(3)


def test_first_example():
    rc = count_reps(Params(21, 8, 5), keep_triples=True)
    assert rc.unweighted == 1
    assert rc.triples == [(7, 11, 3)]
    assert rc.weighted == pytest.approx(LOG_7_11_3, rel=1e-15)
    assert rc.weighted == pytest.approx(5.1262224, abs=1e-7)


@pytest.mark.parametrize("N, y, U", [(11, 4, 3), (15, 5, 3), (40, 1, 1), (101, 20, 1)])
def test_empty_cases(N, y, U):
    for rc in (count_reps(Params(N, y, U)), brute_force_reps(Params(N, y, U))):
        assert rc.unweighted == 0 and rc.weighted == 0


def test_params_validation():
    with pytest.raises(ParameterOrderError):
        Params(21, 11, 5)
    with pytest.raises(ParameterOrderError):
        Params(21, 8, 9)
    with pytest.raises(ValueError):
        Params(21, 8, 0)
    with pytest.raises(OracleScaleError):
        brute_force_reps(Params(2 * 10**6, 10, 5))


def test_weighted_ratio():
    expected = math.log(5) * math.log(8) * math.log(21) / LOG_7_11_3
    assert weighted_ratio(Params(21, 8, 5)) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(1.98766, abs=1e-5)
    with pytest.raises(ZeroCountError):
        weighted_ratio(Params(11, 4, 3))


def test_weighted_ratio_drifts_down():
    ratios = []
    for N in (10**5 + 3, 10**6 + 3, 10**7 + 3):
        y = N // 3
        ratios.append(weighted_ratio(Params(N, y, math.floor(y**0.6))))
    assert ratios[0] > ratios[1] > ratios[2] > 1


def test_triples_satisfy_constraints():
    p = Params(2001, 600, 300)
    rc = count_reps(p, keep_triples=True)
    assert len(rc.triples) == rc.unweighted > 0
    for p1, p2, p3 in rc.triples:
        assert p1 + p2 + p3 == p.N
        assert p.N - 2 * p.y < p1 <= p.N - p.y
        assert p.y < p2 <= 2 * p.y
        assert p3 <= p.U
        assert all(is_prime_td(v) for v in (p1, p2, p3))
    recomputed = math.fsum(math.log(a) * math.log(b) * math.log(c) for a, b, c in rc.triples)
    assert rc.weighted == pytest.approx(recomputed, rel=1e-12)


def test_triple_cap():
    rc = count_reps(Params(2001, 600, 300), keep_triples=True, triple_cap=3)
    assert rc.triples is None and rc.unweighted > 3


def test_monotone_in_U():
    N, y = 3001, 1000
    counts = [count_reps(Params(N, y, U)).unweighted for U in range(1, y + 1, 37)]
    assert counts == sorted(counts)


def test_even_N_against_oracle():
    for N in range(40, 400, 14):
        y = N // 3
        for U in (2, 3, y // 2, y):
            if U < 1 or U > y:
                continue
            a = count_reps(Params(N, y, U), keep_triples=True)
            b = brute_force_reps(Params(N, y, U))
            assert a.unweighted == b.unweighted
            assert sorted(a.triples) == sorted(b.triples)
            assert all(2 in t for t in a.triples)
