"""The circle method on a finite grid of M-th roots of unity.

Averaging S1 S2 S3 e(-N alpha) over alpha = k/M reproduces the weighted count
exactly once M exceeds y + U, because every frequency p1 + p2 + p3 - N lies
in (-y, y + U]. The grid values of each S_i come from one FFT of the
log-weight array folded modulo M; a direct evaluation path serves as oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arcs import Dissection, grid_labels
from .arith import RationalPoint
from .count import Params
from .expsum import TWO_PI, frac_mul
from .primes import PrimeWindow, make_window, window_for
from .singular import singular_truncated

__all__ = [
    "GridSpec",
    "GridTooSmallError",
    "SplitResult",
    "ParsevalReport",
    "SupScanReport",
    "default_grid",
    "grid_values",
    "grid_values_direct",
    "discrete_circle",
    "split_R",
    "pair_count",
    "i3_exact",
    "major_main_term",
    "parseval_check",
    "minor_sup_scan",
]

IMAG_TOL = 1e-6


class GridTooSmallError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    M: int


def default_grid(p: Params) -> GridSpec:
    """Smallest power of two above 2(y + U)."""
    return GridSpec(1 << (2 * (p.y + p.U)).bit_length())


def _check_grid(p: Params, g: GridSpec) -> None:
    if g.M <= p.y + p.U:
        raise GridTooSmallError(f"M={g.M} must exceed y + U = {p.y + p.U}")


def grid_values(w: PrimeWindow, M: int) -> np.ndarray:
    """S(x, h, k/M) for k = 0..M-1 via one inverse FFT."""
    folded = np.zeros(M, dtype=np.float64)
    if len(w):
        np.add.at(folded, w.primes % M, w.weights)
    return np.fft.ifft(folded) * M


def grid_values_direct(w: PrimeWindow, M: int) -> np.ndarray:
    """Same values as :func:`grid_values` by summing every term (oracle path)."""
    out = np.zeros(M, dtype=np.complex128)
    if not len(w):
        return out
    res = w.primes % M
    for k in range(M):
        ang = TWO_PI * ((res * k) % M).astype(np.float64) / M
        out[k] = complex(math.fsum((w.weights * np.cos(ang)).tolist()), math.fsum((w.weights * np.sin(ang)).tolist()))
    return out


def _integrand(p: Params, M: int, *, direct: bool = False) -> np.ndarray:
    values = grid_values_direct if direct else grid_values
    s1 = values(window_for("S1", p.N, p.y, p.U), M)
    s2 = values(window_for("S2", p.N, p.y, p.U), M)
    s3 = values(window_for("S3", p.N, p.y, p.U), M)
    k = np.arange(M, dtype=np.int64)
    twist = np.exp(-1j * TWO_PI * ((p.N % M) * k % M).astype(np.float64) / M)
    return s1 * s2 * s3 * twist


def _mean_real(values: np.ndarray, M: int) -> float:
    re = math.fsum(values.real.tolist()) / M
    im = math.fsum(values.imag.tolist()) / M
    if abs(im) > IMAG_TOL * (1.0 + abs(re)):
        raise ArithmeticError(f"imaginary residue {im:.3e} too large for real part {re:.6e}")
    return re


def discrete_circle(p: Params, g: GridSpec | None = None, *, direct: bool = False) -> float:
    """(1/M) * sum over k of S1 S2 S3 e(-N k/M), real part."""
    g = g or default_grid(p)
    _check_grid(p, g)
    return _mean_real(_integrand(p, g.M, direct=direct), g.M)


@dataclass(frozen=True)
class SplitResult:
    total: float
    major: float
    minor: float
    dissection: Dissection

    @property
    def residual(self) -> float:
        return self.total - (self.major + self.minor)


def split_R(p: Params, d: Dissection, g: GridSpec | None = None) -> SplitResult:
    """Split the grid average into major-arc and minor-arc grid points."""
    g = g or default_grid(p)
    _check_grid(p, g)
    vals = _integrand(p, g.M)
    on_major = grid_labels(d, g.M) >= 0
    total = math.fsum(vals.real.tolist()) / g.M
    major = math.fsum(vals.real[on_major].tolist()) / g.M
    minor = math.fsum(vals.real[~on_major].tolist()) / g.M
    return SplitResult(total, major, minor, d)


def pair_count(m: np.ndarray | int, y: int, U: int) -> np.ndarray | int:
    """Number of integer pairs y < n2 <= 2y, 1 <= n3 <= U with n2 + n3 = m."""
    upper = np.minimum(2 * y, np.asarray(m) - 1)
    lower = np.maximum(y + 1, np.asarray(m) - U)
    out = np.maximum(upper - lower + 1, 0)
    return int(out) if np.ndim(out) == 0 else out


def i3_exact(center: RationalPoint, p: Params) -> complex:
    """Sum over p1 of log p1 * e((p1 - N) a/q) * #{(n2, n3) : n2 + n3 = N - p1}."""
    w = window_for("S1", p.N, p.y, p.U)
    primes = w.primes
    if not len(primes):
        return 0j
    counts = pair_count(p.N - primes, p.y, p.U).astype(np.float64)
    a, q = center.a, center.q
    ang = TWO_PI * (((primes - p.N) % q) * a % q).astype(np.float64) / q
    amp = w.weights * counts
    return complex(math.fsum((amp * np.cos(ang)).tolist()), math.fsum((amp * np.sin(ang)).tolist()))


def major_main_term(p: Params, P: float) -> float:
    """Truncated singular series times U * y."""
    return singular_truncated(p.N, P).value * p.U * p.y


@dataclass(frozen=True)
class ParsevalReport:
    lhs: float
    rhs: float
    ok: bool


def parseval_check(w: PrimeWindow, M: int, *, rtol: float = 1e-8) -> ParsevalReport:
    """Grid mean of |S|^2 against the sum of log^2 p."""
    if M <= w.h:
        raise GridTooSmallError(f"M={M} must exceed h={w.h}")
    s = grid_values(w, M)
    lhs = math.fsum((s.real * s.real + s.imag * s.imag).tolist()) / M
    rhs = math.fsum((w.weights * w.weights).tolist())
    return ParsevalReport(lhs, rhs, abs(lhs - rhs) <= rtol * rhs)


@dataclass(frozen=True)
class SupScanReport:
    max_abs: float
    weyl_shape: float  # largest |S3| / ((sqrt(qU) + U/sqrt(q) + U^(4/5)) log^3 U)
    arcs: int
    samples: int


def minor_sup_scan(U: int, d: Dissection, samples: int, *, seed: int = 0) -> SupScanReport:
    """Sample |S(U, U, alpha)| on each minor-cover arc and compare with the Weyl shape."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    w = make_window(U, U)
    rng = np.random.default_rng(seed)
    logU3 = math.log(U) ** 3 if U > 1 else 1.0
    primes = w.primes
    max_abs = 0.0
    shape = 0.0
    for arc in d.minor_cover:
        q = arc.center.q
        r = float(arc.radius)
        betas = rng.uniform(-r, r, size=samples)
        weyl = (math.sqrt(q * U) + U / math.sqrt(q) + U**0.8) * logU3
        rational = ((primes % q) * arc.center.a % q).astype(np.float64) / q
        for b in betas:
            if not len(primes):
                continue
            t = rational + frac_mul(primes, float(b))
            ang = TWO_PI * (t - np.floor(t))
            val = abs(complex(float(np.dot(w.weights, np.cos(ang))), float(np.dot(w.weights, np.sin(ang)))))
            max_abs = max(max_abs, val)
            shape = max(shape, val / weyl)
    return SupScanReport(max_abs, shape, len(d.minor_cover), samples)
