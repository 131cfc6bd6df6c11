"""The singular series as a truncated sum over moduli and as an Euler product."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import arith_tables, factorize, mobius, totient
from .primes import sieve_range

__all__ = [
    "SingularValue",
    "DecayScan",
    "ramanujan_f",
    "ramanujan_f_table",
    "singular_truncated",
    "singular_euler",
    "euler_cutoff_for",
    "truncation_decay_scan",
]


@dataclass(frozen=True)
class SingularValue:
    value: float
    route: str  # "truncated_series" | "euler_product"
    cutoff: float
    tail_bound: float = 0.0


def ramanujan_f(q: int, N: int) -> int:
    """Sum of e(-N a / q) over reduced residues a mod q (closed form)."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    r = q // math.gcd(q, N)
    mu = mobius(r)
    if mu == 0:
        return 0
    return mu * totient(q) // totient(r)


def ramanujan_f_table(P: int, N: int) -> np.ndarray:
    """f(q) for q = 1..P as an int64 array (index 0 unused)."""
    mu, phi = arith_tables(max(P, 1))
    q = np.arange(P + 1, dtype=np.int64)
    if abs(N) < 2**63:
        d = np.gcd(q, np.int64(N))
    else:
        d = np.array([math.gcd(int(k), N) for k in q], dtype=np.int64)
    d[0] = 1
    r = q // d
    out = mu[r] * (phi[q] // np.maximum(phi[r], 1))
    out[0] = 0
    return out


def singular_truncated(N: int, P: float) -> SingularValue:
    """Sum over q <= P of mu(q) f(q) / phi(q)^3."""
    if P < 1:
        raise ValueError(f"P must be >= 1, got {P}")
    top = math.floor(P)
    mu, phi = arith_tables(top)
    f = ramanujan_f_table(top, N)
    q = np.flatnonzero(mu[1 : top + 1]) + 1  # mu(q) = 0 terms vanish
    phif = phi[q].astype(np.float64)
    terms = (mu[q] * f[q]).astype(np.float64) / (phif * phif * phif)
    return SingularValue(math.fsum(terms.tolist()), "truncated_series", P, 0.0)


def singular_euler(N: int, prime_cutoff: int) -> SingularValue:
    """Euler product over p <= prime_cutoff plus every prime factor of N.

    The omitted factors all exceed 1 and multiply to at most
    exp(1/(2(T-1)^2)); ``tail_bound`` is the resulting absolute excess.
    """
    if prime_cutoff < 2:
        raise ValueError(f"prime cutoff must be >= 2, got {prime_cutoff}")
    if N % 2 == 0:
        return SingularValue(0.0, "euler_product", prime_cutoff, 0.0)
    divisors = sorted(factorize(abs(N))) if N else []
    ps = sieve_range(0, prime_cutoff)
    pm1 = ps.astype(np.float64) - 1.0
    hit = np.isin(ps, np.array(divisors, dtype=np.int64))
    with np.errstate(divide="ignore"):  # p = 2 only enters through the 1/(p-1)^3 branch here
        logs = np.where(hit, np.log1p(-1.0 / (pm1 * pm1)), np.log1p(1.0 / (pm1 * pm1 * pm1)))
    extra = [math.log1p(-1.0 / (p - 1) ** 2) for p in divisors if p > prime_cutoff]
    value = math.exp(math.fsum(logs.tolist() + extra))
    tail = value * math.expm1(1.0 / (2.0 * (prime_cutoff - 1) ** 2))
    return SingularValue(value, "euler_product", prime_cutoff, tail)


def euler_cutoff_for(tail: float) -> int:
    """A cutoff T with 1/(2(T-1)^2) <= tail/4, enough for tail_bound < tail."""
    return math.isqrt(math.ceil(2.0 / tail)) + 2


@dataclass(frozen=True)
class DecayScan:
    N: int
    reference: SingularValue
    P: list[float]
    errors: list[float]
    slope: float


def truncation_decay_scan(N: int, P_list: list[float], *, prime_cutoff: int = 10**6) -> DecayScan:
    """|S(N, P) - S(N)| along ``P_list`` with a log-log least-squares slope."""
    if list(P_list) != sorted(P_list):
        raise ValueError("P_list must be ascending")
    ref = singular_euler(N, prime_cutoff)
    if ref.tail_bound >= 1e-9:
        raise ValueError(f"Euler reference too coarse (tail bound {ref.tail_bound:.3e})")
    errors = [abs(singular_truncated(N, P).value - ref.value) for P in P_list]
    slope = float("nan")
    positive = [(P, e) for P, e in zip(P_list, errors) if e > 0]
    if len(positive) >= 2:
        xs = np.log([P for P, _ in positive])
        ys = np.log([e for _, e in positive])
        slope = float(np.polyfit(xs, ys, 1)[0])
    return DecayScan(N, ref, list(P_list), errors, slope)
