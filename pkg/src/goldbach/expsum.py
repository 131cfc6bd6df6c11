"""The prime exponential sum S(x, h, alpha), the geometric sum v and the error Delta.

Phases p*alpha are reduced modulo 1 before exponentiation. For a tagged
point a/q + beta, the rational part uses (p mod q)*a mod q in integers, and
the real offset is split so that the leading product is exact in doubles.
All sums are accumulated with :func:`math.fsum`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import RationalPoint, mobius, totient
from .primes import PrimeWindow

__all__ = [
    "UnitPoint",
    "ScanTooLargeError",
    "DeltaReport",
    "normalize_beta",
    "frac_mul",
    "eval_S",
    "eval_v",
    "eval_delta",
    "delta_reduction_check",
]

TWO_PI = 2.0 * math.pi
SCAN_CAP = 10**5


class ScanTooLargeError(ValueError):
    pass


def normalize_beta(beta: float) -> float:
    """Representative of beta modulo 1 in [-1/2, 1/2]."""
    b = math.fmod(beta, 1.0)
    if b > 0.5:
        b -= 1.0
    elif b < -0.5:
        b += 1.0
    return b


@dataclass(frozen=True)
class UnitPoint:
    """A point of R/Z, optionally tagged as ``center + beta``."""

    alpha: float
    center: RationalPoint | None = None
    beta: float = 0.0

    @classmethod
    def tagged(cls, center: RationalPoint, beta: float) -> "UnitPoint":
        beta = normalize_beta(beta)
        return cls(center.a / center.q + beta, center, beta)


def _split(v: float) -> tuple[float, float]:
    # hi keeps 18 significant bits so hi * n is exact for |n| < 2**35.
    if v == 0.0 or not math.isfinite(v):
        return v, 0.0
    m, e = math.frexp(v)
    hi = math.ldexp(math.floor(m * 2**18) / 2**18, e)
    return hi, v - hi


def frac_mul(n: np.ndarray, beta: float) -> np.ndarray:
    """Fractional part of n*beta in [0, 1) for integer n (|n| < 2**35)."""
    nf = np.asarray(n, dtype=np.float64)
    hi, lo = _split(beta)
    t = nf * hi
    t -= np.floor(t)
    t += nf * lo
    t -= np.floor(t)
    return t


def _phases(primes: np.ndarray, alpha: UnitPoint | float) -> np.ndarray:
    if isinstance(alpha, UnitPoint):
        if alpha.center is not None:
            a, q = alpha.center.a, alpha.center.q
            rational = ((primes % q) * a % q).astype(np.float64) / q
            t = rational + frac_mul(primes, alpha.beta)
            return t - np.floor(t)
        alpha = alpha.alpha
    return frac_mul(primes, alpha)


def _sum_exp(weights: np.ndarray, phases: np.ndarray) -> complex:
    ang = TWO_PI * phases
    re = math.fsum((weights * np.cos(ang)).tolist())
    im = math.fsum((weights * np.sin(ang)).tolist())
    return complex(re, im)


def eval_S(w: PrimeWindow, alpha: UnitPoint | float) -> complex:
    """Sum of log p * e(p*alpha) over the primes of the window."""
    if len(w) == 0:
        return 0j
    return _sum_exp(w.weights, _phases(w.primes, alpha))


def eval_v(x: int, h: int, beta: float) -> complex:
    """Closed form of the sum of e(n*beta) over x-h < n <= x."""
    if not 1 <= h <= x:
        raise ValueError(f"need 1 <= h <= x, got x={x}, h={h}")
    b = normalize_beta(beta)
    if b == 0.0:
        return complex(h, 0.0)
    fb = Fraction(b)
    # v = e(beta (2x - h + 1) / 2) * sin(pi h beta) / sin(pi beta); reductions are exact.
    phase = float(fb * (2 * x - h + 1) / 2 % 1)
    if abs(b) * h < 1e-6:
        # Taylor form; avoids sin of subnormal arguments
        amp = h * (1.0 - (math.pi * b) ** 2 * (h * h - 1) / 6.0)
    else:
        hb = fb * h
        hb -= 2 * round(hb / 2)  # into [-1, 1]
        amp = math.sin(math.pi * float(hb)) / math.sin(math.pi * b)
    return _polar(math.copysign(min(abs(amp), h), amp), TWO_PI * phase)


def _polar(amp: float, theta: float) -> complex:
    """amp * e^{i theta}, nudged so the float modulus never exceeds |amp|."""
    z = complex(amp * math.cos(theta), amp * math.sin(theta))
    while abs(z) > abs(amp):
        z *= 1.0 - 2.0**-52
    return z


def eval_delta(w: PrimeWindow, center: RationalPoint, beta: float) -> complex:
    """S(x, h, a/q + beta) - mu(q)/phi(q) * v(x, h, beta)."""
    s = eval_S(w, UnitPoint.tagged(center, beta))
    mu = mobius(center.q)
    if mu == 0:
        return s
    return s - (mu / totient(center.q)) * eval_v(w.x, w.h, beta)


@dataclass(frozen=True)
class DeltaReport:
    lhs: float
    rhs: float
    ok: bool
    rhs_partial_summation: float


def _delta_prefix(w: PrimeWindow, center: RationalPoint) -> np.ndarray:
    """|Delta(x, t, a/q)| for t = 1..h, built from n = x downwards."""
    h = w.h
    mu = mobius(center.q)
    c = np.full(h, -(mu / totient(center.q)) if mu else 0.0, dtype=np.complex128)
    primes = w.primes
    if len(primes):
        a, q = center.a, center.q
        ang = TWO_PI * ((primes % q) * a % q).astype(np.float64) / q
        idx = w.x - primes  # position counted from the right end
        c[idx] += w.weights * np.exp(1j * ang)
    return np.abs(np.cumsum(c))


def delta_reduction_check(
    w: PrimeWindow, center: RationalPoint, beta: float, *, cap: int = SCAN_CAP, tol: float = 1e-9
) -> DeltaReport:
    """Compare |Delta(x, h, a/q + beta)| with (1 + |beta| h) max_t |Delta(x, t, a/q)|.

    ``rhs_partial_summation`` carries the bound with the 2*pi factor that
    partial summation against e(beta n) produces; ``ok`` refers to ``rhs``.
    """
    if w.h > cap:
        raise ScanTooLargeError(f"h={w.h} exceeds the t-scan cap {cap}")
    b = normalize_beta(beta)
    lhs = abs(eval_delta(w, center, b))
    peak = float(_delta_prefix(w, center).max())
    rhs = (1.0 + abs(b) * w.h) * peak
    rhs_ps = (1.0 + TWO_PI * abs(b) * w.h) * peak
    return DeltaReport(lhs, rhs, lhs <= rhs + tol * (1.0 + rhs), rhs_ps)
