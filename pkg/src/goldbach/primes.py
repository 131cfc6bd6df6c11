"""Segmented sieve of Eratosthenes and log-weighted prime windows.

The global sieve cap defaults to 2**34 and may be overridden with the
``GOLDBACH_SIEVE_CAP`` environment variable or :func:`configure`. A binary
cache of sieved primes can be attached the same way (``GOLDBACH_SIEVE_CACHE``).

Cache file layout (little endian): ``lo: u64, hi: u64, count: u64`` followed
by ``count`` primes as ``u64``, holding exactly the primes of (lo, hi].
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

__all__ = [
    "SieveLimitError",
    "ParameterOrderError",
    "PrimeWindow",
    "configure",
    "sieve_cap",
    "sieve_range",
    "prime_bitmap",
    "make_window",
    "window_for",
    "read_cache",
    "write_cache",
]

DEFAULT_CAP = 2**34
DEFAULT_SEGMENT = 2**20
_HEADER = struct.Struct("<QQQ")

_cap: int | None = None
_cache_path: str | None = None


class SieveLimitError(ValueError):
    """Requested range lies beyond the configured sieve cap."""


class ParameterOrderError(ValueError):
    """Parameters violate U <= y <= N/2."""


def configure(cap: int | None = None, cache: str | os.PathLike | None = None) -> None:
    """Set the process-wide sieve cap and cache path (``None`` restores defaults)."""
    global _cap, _cache_path
    _cap = cap
    _cache_path = os.fspath(cache) if cache is not None else None


def sieve_cap() -> int:
    if _cap is not None:
        return _cap
    env = os.environ.get("GOLDBACH_SIEVE_CAP")
    return int(env) if env else DEFAULT_CAP


def _cache_file() -> str | None:
    return _cache_path if _cache_path is not None else os.environ.get("GOLDBACH_SIEVE_CACHE")


@lru_cache(maxsize=4)
def _base_primes(limit: int) -> np.ndarray:
    """All primes <= limit by a plain sieve (used to strike segments)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    out = np.flatnonzero(flags).astype(np.int64)
    out.setflags(write=False)
    return out


def _sieve_segments(lo: int, hi: int, segment: int) -> np.ndarray:
    base = _base_primes(math.isqrt(hi))
    chunks = []
    start = lo + 1
    while start <= hi:
        stop = min(start + segment, hi + 1)  # numbers start..stop-1
        flags = np.ones(stop - start, dtype=bool)
        for p in base:
            p = int(p)
            pp = p * p
            if pp >= stop:
                break
            first = max(pp, -(-start // p) * p)
            flags[first - start :: p] = False
        if start <= 1:
            flags[: 2 - start] = False
        chunks.append(np.flatnonzero(flags).astype(np.int64) + start)
        start = stop
    if not chunks:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(chunks)


def sieve_range(lo: int, hi: int, *, segment: int = DEFAULT_SEGMENT) -> np.ndarray:
    """Ascending int64 array of the primes p with lo < p <= hi."""
    if lo < 0 or hi < lo:
        raise ValueError(f"need 0 <= lo <= hi, got ({lo}, {hi}]")
    cap = sieve_cap()
    if hi > cap:
        raise SieveLimitError(f"hi={hi} exceeds sieve cap {cap}")
    path = _cache_file()
    if path and os.path.exists(path):
        clo, chi, cached = read_cache(path)
        if clo <= lo and hi <= chi:
            i, j = np.searchsorted(cached, [lo, hi], side="right")
            return cached[i:j].astype(np.int64)
    return _sieve_segments(lo, hi, segment)


def prime_bitmap(lo: int, hi: int) -> np.ndarray:
    """Boolean array ``b`` of length hi-lo with ``b[n-lo-1]`` true iff n in (lo, hi] is prime."""
    flags = np.zeros(hi - lo, dtype=bool)
    flags[sieve_range(lo, hi) - lo - 1] = True
    return flags


def write_cache(path: str | os.PathLike, lo: int, hi: int) -> np.ndarray:
    primes = _sieve_segments(lo, hi, DEFAULT_SEGMENT)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(lo, hi, len(primes)))
        fh.write(primes.astype("<u8").tobytes())
    return primes


def read_cache(path: str | os.PathLike) -> tuple[int, int, np.ndarray]:
    raw = Path(path).read_bytes()
    lo, hi, count = _HEADER.unpack_from(raw)
    body = np.frombuffer(raw, dtype="<u8", count=count, offset=_HEADER.size)
    if len(body) != count:
        raise ValueError(f"truncated sieve cache {path}")
    return lo, hi, body.astype(np.int64)


@dataclass(frozen=True, eq=False)
class PrimeWindow:
    """Primes of (x-h, x] with their natural-log weights.

    ``offsets`` holds ``p - (x - h)`` (uint32 when h < 2**32).
    """

    x: int
    h: int
    offsets: np.ndarray
    weights: np.ndarray

    @property
    def lo(self) -> int:
        return self.x - self.h

    @property
    def primes(self) -> np.ndarray:
        return self.offsets.astype(np.int64) + self.lo

    def __len__(self) -> int:
        return len(self.offsets)


def make_window(x: int, h: int) -> PrimeWindow:
    if not 1 <= h <= x:
        raise ValueError(f"need 1 <= h <= x, got x={x}, h={h}")
    primes = sieve_range(x - h, x)
    dtype = np.uint32 if h < 2**32 else np.int64
    offsets = (primes - (x - h)).astype(dtype)
    weights = np.log(primes.astype(np.float64))
    offsets.setflags(write=False)
    weights.setflags(write=False)
    return PrimeWindow(x, h, offsets, weights)


def window_for(role: str, N: int, y: int, U: int) -> PrimeWindow:
    """The window behind S1 (p1), S2 (p2) or S3 (p3) for parameters (N, y, U)."""
    if not (U <= y and 2 * y <= N):
        raise ParameterOrderError(f"need U <= y <= N/2, got N={N}, y={y}, U={U}")
    if role == "S1":
        return make_window(N - y, y)
    if role == "S2":
        return make_window(2 * y, y)
    if role == "S3":
        return make_window(U, U)
    raise ValueError(f"unknown window role {role!r}")
