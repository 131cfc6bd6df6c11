"""Exact restricted ternary representation counts.

For parameters (N, y, U) the representations are p1 + p2 + p3 = N with
N - 2y < p1 <= N - y, y < p2 <= 2y and p3 <= U. The unweighted count is
the number of such triples; the weighted sum runs over
log p1 * log p2 * log p3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .primes import ParameterOrderError, prime_bitmap, sieve_range

__all__ = [
    "Params",
    "RepCount",
    "OracleScaleError",
    "ZeroCountError",
    "count_reps",
    "brute_force_reps",
    "weighted_ratio",
]

ORACLE_LIMIT = 10**6
TRIPLE_CAP = 10**6


class OracleScaleError(ValueError):
    pass


class ZeroCountError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class Params:
    N: int
    y: int
    U: int

    def __post_init__(self) -> None:
        if min(self.N, self.y, self.U) < 1:
            raise ValueError(f"N, y, U must be positive, got {self}")
        if not (self.U <= self.y and 2 * self.y <= self.N):
            raise ParameterOrderError(f"need U <= y <= N/2, got N={self.N}, y={self.y}, U={self.U}")


@dataclass
class RepCount:
    params: Params
    unweighted: int
    weighted: float
    triples: list[tuple[int, int, int]] | None = field(default=None, repr=False)


def count_reps(p: Params, *, keep_triples: bool = False, triple_cap: int = TRIPLE_CAP) -> RepCount:
    """Count by scanning p3 and p2, with p1 looked up in a bitmap of its window."""
    N, y, U = p.N, p.y, p.U
    lo1 = N - 2 * y
    p1_flags = prime_bitmap(lo1, N - y)
    p2 = sieve_range(y, 2 * y)
    p3 = sieve_range(0, U)
    log_p2 = np.log(p2.astype(np.float64))

    total = 0
    partial: list[float] = []
    triples: list[tuple[int, int, int]] | None = [] if keep_triples else None
    for r in p3.tolist():
        p1 = N - r - p2
        inside = (p1 > lo1) & (p1 <= N - y)
        hit = np.zeros(len(p2), dtype=bool)
        hit[inside] = p1_flags[p1[inside] - lo1 - 1]
        n = int(np.count_nonzero(hit))
        if not n:
            continue
        total += n
        prods = np.log(p1[hit].astype(np.float64)) * log_p2[hit] * math.log(r)
        partial.append(math.fsum(prods.tolist()))
        if triples is not None and len(triples) + n <= triple_cap:
            triples.extend(zip(p1[hit].tolist(), p2[hit].tolist(), [r] * n))
    if triples is not None and len(triples) != total:
        triples = None  # over the cap; not retained
    return RepCount(p, total, math.fsum(partial), triples)


def brute_force_reps(p: Params) -> RepCount:
    """Independent oracle: every (p1, p2, p3) of the three prime lists, summed and compared."""
    if p.N > ORACLE_LIMIT:
        raise OracleScaleError(f"oracle limited to N <= {ORACLE_LIMIT}, got {p.N}")
    N, y, U = p.N, p.y, p.U
    p1 = sieve_range(N - 2 * y, N - y)
    p2 = sieve_range(y, 2 * y)
    p3 = sieve_range(0, U)
    pair = p1[:, None] + p2[None, :]
    i, j, k = np.nonzero(pair[:, :, None] + p3[None, None, :] == N)
    a, b, c = p1[i], p2[j], p3[k]
    triples = list(zip(a.tolist(), b.tolist(), c.tolist()))
    logs = [np.log(v.astype(np.float64)) for v in (a, b, c)]
    weighted = math.fsum((logs[0] * logs[1] * logs[2]).tolist())
    return RepCount(p, len(triples), weighted, triples)


def weighted_ratio(p: Params, rc: RepCount | None = None) -> float:
    """count * log U * log y * log N / weighted sum."""
    rc = rc or count_reps(p)
    if rc.weighted == 0:
        raise ZeroCountError(f"no representations for {p}")
    return rc.unweighted * math.log(p.U) * math.log(p.y) * math.log(p.N) / rc.weighted
