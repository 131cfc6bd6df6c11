"""Dirichlet approximation, the major-arc family and the minor-arc covering.

The unit interval is taken as (1/Q, 1 + 1/Q]. Arcs are closed intervals
``[a/q - 1/(qQ), a/q + 1/(qQ)]`` with Q rational, so every endpoint and
every membership test is an exact :class:`~fractions.Fraction` comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple

import numpy as np

from .arith import RationalPoint, reduce

__all__ = [
    "Arc",
    "Dissection",
    "DisjointReport",
    "as_fraction",
    "dirichlet_approx",
    "convergents",
    "build_dissection",
    "reduced_fractions",
    "check_disjoint",
    "check_within_unit",
    "check_coverage",
    "to_unit_interval",
    "classify",
    "covering_arc",
    "grid_labels",
]


def as_fraction(v: int | float | Fraction | str) -> Fraction:
    """Exact conversion; floats are taken at their binary value."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError(f"non-finite value {v}")
        return Fraction(v)
    return Fraction(v)


@dataclass(frozen=True)
class Arc:
    center: RationalPoint
    Q: Fraction

    @property
    def radius(self) -> Fraction:
        return 1 / (self.center.q * self.Q)

    @property
    def left(self) -> Fraction:
        return self.center.value - self.radius

    @property
    def right(self) -> Fraction:
        return self.center.value + self.radius

    def contains(self, alpha: Fraction) -> bool:
        return abs(alpha - self.center.value) <= self.radius


@dataclass(frozen=True)
class Dissection:
    """Major arcs (q <= P) and the minor covering (P < q <= Q).

    Instances built by hand are not validated; :func:`build_dissection` is.
    """

    P: Fraction
    Q: Fraction
    major: tuple[Arc, ...]
    minor_cover: tuple[Arc, ...] = field(default=(), repr=False)


class DisjointReport(NamedTuple):
    ok: bool
    witness: tuple[Arc, Arc] | None = None


def convergents(alpha: Fraction) -> Iterator[tuple[int, int]]:
    """Continued-fraction convergents (p, q) of a rational alpha, in order."""
    p_prev, p = 1, math.floor(alpha)
    q_prev, q = 0, 1
    yield p, q
    rest = alpha - p
    while rest:
        x = 1 / rest
        a = math.floor(x)
        rest = x - a
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield p, q


def dirichlet_approx(alpha: float | Fraction, Q: int | float | Fraction) -> RationalPoint:
    """Reduced a/q with q <= Q and |alpha - a/q| <= 1/(qQ) modulo 1.

    Returns the solution of smallest denominator. A minimal q is a best
    approximation of the second kind, hence a convergent; the distances
    |q alpha - p| strictly decrease along convergents, so the first convergent
    meeting the bound is the answer. The nearest integer is tried first to
    cover the q = 1 corner the convergent list can miss.
    """
    x = as_fraction(alpha)
    Qf = as_fraction(Q)
    if Qf <= 1:
        raise ValueError(f"Q must exceed 1, got {Q}")
    bound = 1 / Qf
    near = round(x)
    if abs(x - near) <= bound:
        return reduce(near, 1)
    for p, q in convergents(x):
        if q > Qf:
            break
        if abs(q * x - p) <= bound:
            return reduce(p, q)
    raise AssertionError("Dirichlet approximation not found")  # unreachable


def reduced_fractions(q_lo: int, q_hi: int) -> Iterator[RationalPoint]:
    """All reduced a/q in (0, 1] with q_lo < q <= q_hi, ordered by (q, a)."""
    for q in range(q_lo + 1, q_hi + 1):
        for a in range(1, q + 1):
            if math.gcd(a, q) == 1:
                yield RationalPoint(a, q)


def build_dissection(P: int | float | Fraction, Q: int | float | Fraction, *, minor: bool = True) -> Dissection:
    P_, Q_ = as_fraction(P), as_fraction(Q)
    if not Q_ > 2:
        raise ValueError(f"need Q > 2, got Q={Q}")
    if not 1 <= P_ <= Q_ / 2:
        raise ValueError(f"need 1 <= P <= Q/2, got P={P}, Q={Q}")
    p_int, q_int = math.floor(P_), math.floor(Q_)
    major = tuple(Arc(c, Q_) for c in reduced_fractions(0, p_int))
    cover = tuple(Arc(c, Q_) for c in reduced_fractions(p_int, q_int)) if minor else ()
    return Dissection(P_, Q_, major, cover)


def check_disjoint(d: Dissection) -> DisjointReport:
    """Exact pairwise disjointness of the (closed) major arcs by a sweep."""
    arcs = sorted(d.major, key=lambda arc: arc.left)
    reach: Arc | None = None
    for arc in arcs:
        if reach is not None and arc.left <= reach.right:
            return DisjointReport(False, (reach, arc))
        if reach is None or arc.right > reach.right:
            reach = arc
    return DisjointReport(True)


def check_within_unit(d: Dissection) -> bool:
    lo, hi = 1 / d.Q, 1 + 1 / d.Q
    return all(lo < arc.left and arc.right <= hi for arc in d.major)


def check_coverage(d: Dissection) -> bool:
    """Whether major and minor arcs together cover (1/Q, 1 + 1/Q]."""
    lo, hi = 1 / d.Q, 1 + 1 / d.Q
    covered = lo
    for arc in sorted(d.major + d.minor_cover, key=lambda arc: arc.left):
        if arc.left > covered:
            return False
        covered = max(covered, arc.right)
        if covered >= hi:
            return True
    return covered >= hi


def to_unit_interval(alpha: Fraction, Q: Fraction) -> Fraction:
    """The representative of alpha mod 1 in (1/Q, 1 + 1/Q]."""
    lo = 1 / Q
    t = alpha - math.floor(alpha)
    if t <= lo:
        t += 1
    return t


def classify(alpha: float | Fraction, d: Dissection) -> RationalPoint | None:
    """Center of the major arc holding alpha, or ``None`` for a minor point.

    Touching closed arcs resolve to the smaller q.
    """
    t = to_unit_interval(as_fraction(alpha), d.Q)
    for q in range(1, math.floor(d.P) + 1):
        a = round(t * q)
        if 1 <= a <= q and math.gcd(a, q) == 1 and abs(t - Fraction(a, q)) <= 1 / (q * d.Q):
            return RationalPoint(a, q)
    return None


def covering_arc(alpha: float | Fraction, d: Dissection) -> Arc | None:
    """An arc of ``major + minor_cover`` containing alpha (smallest q first)."""
    t = to_unit_interval(as_fraction(alpha), d.Q)
    for q in range(1, math.floor(d.Q) + 1):
        a = round(t * q)
        if 1 <= a <= q and math.gcd(a, q) == 1 and abs(t - Fraction(a, q)) <= 1 / (q * d.Q):
            return Arc(RationalPoint(a, q), d.Q)
    return None


def grid_labels(d: Dissection, M: int) -> np.ndarray:
    """For grid points k/M (k = 0..M-1): index into ``d.major`` or -1 if minor.

    Each k/M is mapped to (1/Q, 1 + 1/Q] and compared with arc endpoints in
    exact integer arithmetic. Arcs are processed from largest q down so a
    point on touching arcs keeps the smaller q.
    """
    labels = np.full(M, -1, dtype=np.int64)
    lo, hi = 1 / d.Q, 1 + 1 / d.Q
    order = sorted(range(len(d.major)), key=lambda i: -d.major[i].center.q)
    for i in order:
        arc = d.major[i]
        left, right = max(arc.left, lo), min(arc.right, hi)
        j0 = math.ceil(left * M)
        if j0 == left * M and left == lo:
            j0 += 1  # lo itself is outside the half-open interval
        j1 = math.floor(right * M)
        if j1 < j0:
            continue
        labels[np.arange(j0, j1 + 1) % M] = i
    return labels
