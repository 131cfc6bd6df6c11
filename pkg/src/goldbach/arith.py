"""Exact integer and rational helpers: Moebius, totient, reduced fractions.

Exact rationals are :class:`fractions.Fraction` throughout; comparisons on
them are cross-multiplications of Python ints and never touch floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "RationalPoint",
    "factorize",
    "mobius",
    "totient",
    "reduce",
    "mobius_table",
    "totient_table",
    "arith_tables",
]


@dataclass(frozen=True, order=True)
class RationalPoint:
    """A reduced fraction a/q in (0, 1], i.e. a point of R/Z with a rational label."""

    a: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError(f"denominator must be >= 1, got {self.q}")
        if not 1 <= self.a <= self.q:
            raise ValueError(f"numerator must satisfy 1 <= a <= q, got {self.a}/{self.q}")
        if math.gcd(self.a, self.q) != 1:
            raise ValueError(f"{self.a}/{self.q} is not reduced")

    @property
    def value(self) -> Fraction:
        return Fraction(self.a, self.q)

    def __float__(self) -> float:
        return self.a / self.q

    def __str__(self) -> str:
        return f"{self.a}/{self.q}"


def reduce(a: int, q: int) -> RationalPoint:
    """Reduce ``a/q`` modulo 1 into the interval (0, 1].

    >>> reduce(7, 3)
    RationalPoint(a=1, q=3)
    """
    if q < 1:
        raise ValueError(f"denominator must be >= 1, got {q}")
    a %= q
    if a == 0:
        return RationalPoint(1, 1)
    g = math.gcd(a, q)
    return RationalPoint(a // g, q // g)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs up to 64 bits)."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError(f"mobius needs n >= 1, got {n}")
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def totient(n: int) -> int:
    if n < 1:
        raise ValueError(f"totient needs n >= 1, got {n}")
    result = n
    for p in factorize(n):
        result -= result // p
    return result


@lru_cache(maxsize=8)
def arith_tables(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """Moebius and totient values for 0..limit as read-only int64 arrays.

    Index 0 is a placeholder (mu[0] = 0, phi[0] = 0).
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    mu = np.ones(limit + 1, dtype=np.int64)
    phi = np.arange(limit + 1, dtype=np.int64)
    composite = np.zeros(limit + 1, dtype=bool)
    mu[0] = 0
    for p in range(2, limit + 1):
        if composite[p]:
            continue
        composite[p * p :: p] = True
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
        phi[p::p] -= phi[p::p] // p
    mu.setflags(write=False)
    phi.setflags(write=False)
    return mu, phi


def mobius_table(limit: int) -> np.ndarray:
    return arith_tables(limit)[0]


def totient_table(limit: int) -> np.ndarray:
    return arith_tables(limit)[1]
