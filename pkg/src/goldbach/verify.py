"""Experiment drivers: ratio sweeps, Goldbach gap scans, and the U(N) bound.

Parameter rules are short tags evaluated to integers by truncation:

``fraction:c``      floor(c * N), c a rational such as ``1/3``
``power:B:t``       floor(B ** t) with base B in {N, y}
``logpow:B:k``      floor(log(B) ** k)
``density:A:eps``   lower end of the zero-density regime, y = N^(1-1/A) exp(log^(2/3+eps) N)
                    (as a U rule: the same formula in y)
``bound:A:eps``     U = N^((1-1/A)(1-2/A)) exp(log^(2/3+eps) N)
``grh:eps``         y = sqrt(N) log^(2+eps) N, or U = log^(4+eps) N as a U rule
``const:v``         the integer v
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .count import Params, count_reps, weighted_ratio
from .primes import ParameterOrderError, sieve_range
from .singular import euler_cutoff_for, singular_euler

__all__ = [
    "DensityParams",
    "Rule",
    "SweepConfig",
    "GapReport",
    "DegenerateLogError",
    "ZeroMainTermError",
    "SWEEP_HEADER",
    "parse_rule",
    "main_term",
    "asymptotic_ratio",
    "sweep_row",
    "ratio_sweep",
    "sweep_csv",
    "u_exponent",
    "u_bound",
    "arc_parameters",
    "goldbach_bitmap",
    "minimal_p3",
    "gap_scan",
    "load_config",
]

SWEEP_HEADER = ["N", "y", "U", "unweighted", "weighted", "main_term", "ratio", "weighted_ratio", "ms"]
MAIN_TERM_TAIL = 1e-9  # Euler product tail bound used in the main term


class DegenerateLogError(ValueError):
    pass


class ZeroMainTermError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class DensityParams:
    A: float
    epsilon: float

    def __post_init__(self) -> None:
        if not self.A >= 2:
            raise ValueError(f"zero-density exponent must be >= 2, got {self.A}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


def u_exponent(A: float | Fraction) -> float | Fraction:
    """Power of N in the restricted-prime bound: (1 - 1/A)(1 - 2/A)."""
    return (1 - 1 / A) * (1 - 2 / A)


def u_bound(N: int, dp: DensityParams) -> float:
    if N < 3:
        raise ValueError(f"N must be >= 3, got {N}")
    logN = math.log(N)
    return math.exp(float(u_exponent(dp.A)) * logN + logN ** (2.0 / 3.0 + dp.epsilon))


def arc_parameters(N: int, U: int, c1: float = 9.0, c2: float = 10.0) -> tuple[float, float]:
    """P = log^c1 N and Q = U / log^c2 N; raises when 1 <= P <= Q/2 fails."""
    if not 0 < c1 < c2:
        raise ValueError(f"need 0 < c1 < c2, got c1={c1}, c2={c2}")
    logN = math.log(N)
    P, Q = logN**c1, U / logN**c2
    if not (Q > 2 and 1 <= P <= Q / 2):
        raise ValueError(f"arc parameters infeasible at N={N}, U={U}: P={P:.4g}, Q={Q:.4g}")
    return P, Q


@dataclass(frozen=True)
class Rule:
    tag: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return ":".join((self.tag,) + self.args)

    def __call__(self, N: int, y: int | None = None) -> int:
        t, a = self.tag, self.args
        if t == "const":
            return int(a[0])
        if t == "fraction":
            return math.floor(Fraction(a[0]) * N)
        if t in ("power", "logpow"):
            base = {"N": N, "y": y}[a[0]]
            if base is None:
                raise ValueError(f"rule {self} needs y")
            v = base ** float(a[1]) if t == "power" else math.log(base) ** float(a[1])
            return math.floor(v)
        if t == "density":
            A, eps = float(Fraction(a[0])), float(a[1])
            base = N if y is None else y
            return math.floor(base ** (1 - 1 / A) * math.exp(math.log(base) ** (2 / 3 + eps)))
        if t == "bound":
            return math.floor(u_bound(N, DensityParams(float(Fraction(a[0])), float(a[1]))))
        if t == "grh":
            eps = float(a[0])
            if y is None:
                return math.floor(math.sqrt(N) * math.log(N) ** (2 + eps))
            return math.floor(math.log(N) ** (4 + eps))
        raise ValueError(f"unknown rule tag {t!r}")


_ARITY = {"const": 1, "fraction": 1, "power": 2, "logpow": 2, "density": 2, "bound": 2, "grh": 1}


def parse_rule(text: str) -> Rule:
    tag, *args = text.strip().split(":")
    if tag not in _ARITY or len(args) != _ARITY[tag]:
        raise ValueError(f"bad rule {text!r}")
    if tag in ("power", "logpow") and args[0] not in ("N", "y"):
        raise ValueError(f"rule base must be N or y in {text!r}")
    return Rule(tag, tuple(args))


@dataclass
class SweepConfig:
    N_grid: list[int]
    y_rule: Rule = field(default_factory=lambda: parse_rule("fraction:1/3"))
    U_rule: Rule = field(default_factory=lambda: parse_rule("power:y:0.6"))
    output: str | None = None
    timing: bool = False
    threads: int = 1

    def params(self) -> tuple[list[Params], list[tuple[int, str]]]:
        ok, skipped = [], []
        for N in self.N_grid:
            try:
                y = self.y_rule(N)
                ok.append(Params(N, y, self.U_rule(N, y)))
            except (ValueError, ParameterOrderError) as exc:
                skipped.append((N, str(exc)))
        return ok, skipped


def main_term(p: Params) -> float:
    """S(N) U y / (log U log y log N) with the Euler product to tail bound 1e-9."""
    if min(p.U, p.y, p.N) < 3:
        raise DegenerateLogError(f"need U, y, N >= 3, got {p}")
    s = singular_euler(p.N, euler_cutoff_for(MAIN_TERM_TAIL))
    return s.value * p.U * p.y / (math.log(p.U) * math.log(p.y) * math.log(p.N))


def asymptotic_ratio(p: Params) -> float:
    mt = main_term(p)
    if mt == 0:
        raise ZeroMainTermError(f"main term vanishes for {p}")
    return count_reps(p).unweighted / mt


def sweep_row(p: Params, *, timing: bool = False) -> dict:
    t0 = time.perf_counter()
    rc = count_reps(p)
    mt = main_term(p)
    row = {
        "N": p.N,
        "y": p.y,
        "U": p.U,
        "unweighted": rc.unweighted,
        "weighted": rc.weighted,
        "main_term": mt,
        "ratio": rc.unweighted / mt if mt else None,
        "weighted_ratio": weighted_ratio(p, rc) if rc.weighted else None,
        "ms": None,
    }
    if timing:
        row["ms"] = (time.perf_counter() - t0) * 1e3
    return row


def ratio_sweep(cfg: SweepConfig) -> tuple[list[dict], list[tuple[int, str]]]:
    """Rows in grid order plus (N, reason) for skipped or failed grid entries."""
    params, skipped = cfg.params()

    def run(p: Params):
        try:
            return sweep_row(p, timing=cfg.timing)
        except (ArithmeticError, ValueError) as exc:
            return exc

    with ThreadPoolExecutor(max_workers=max(1, cfg.threads)) as pool:
        results = list(pool.map(run, params))
    rows = []
    failures = list(skipped)
    for p, res in zip(params, results):
        if isinstance(res, Exception):
            failures.append((p.N, str(res)))
        else:
            rows.append(res)
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(sweep_csv(rows))
    return rows, failures


def sweep_csv(rows: list[dict]) -> str:
    from .cli import format_value

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow([format_value(row[k]) for k in SWEEP_HEADER])
    return buf.getvalue()


def load_config(text: str) -> SweepConfig:
    """Parse ``key = value`` lines (``#`` comments allowed).

    Keys: ``n_grid`` (comma list, or ``start..stop..step``), ``y_rule``,
    ``u_rule``, ``output``, ``timing`` (true/false), ``threads``.
    """
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in ("n_grid", "y_rule", "u_rule", "output", "timing", "threads"):
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        values[key] = val
    grid_text = values.get("n_grid", "")
    if ".." in grid_text:
        start, stop, *step = (int(s) for s in grid_text.split(".."))
        grid = list(range(start, stop + 1, step[0] if step else 2))
    else:
        grid = [int(s) for s in grid_text.split(",") if s.strip()]
    cfg = SweepConfig(grid)
    if "y_rule" in values:
        cfg.y_rule = parse_rule(values["y_rule"])
    if "u_rule" in values:
        cfg.U_rule = parse_rule(values["u_rule"])
    cfg.output = values.get("output")
    cfg.timing = values.get("timing", "false").lower() in ("1", "true", "yes")
    cfg.threads = int(values.get("threads", "1"))
    return cfg


def goldbach_bitmap(limit: int) -> np.ndarray:
    """``g[n]`` true iff n <= limit is a sum of two primes (all n, even or odd)."""
    primes = sieve_range(0, limit)
    g = np.zeros(limit + 1, dtype=bool)
    for i, p in enumerate(primes.tolist()):
        if 2 * p > limit:
            break
        rest = primes[i:]
        rest = rest[: np.searchsorted(rest, limit - p, side="right")]
        g[p + rest] = True
    return g


def minimal_p3(N: int, goldbach: np.ndarray, primes: np.ndarray) -> int | None:
    """Smallest prime p3 with N - p3 a sum of two primes."""
    for r in primes.tolist():
        if N - r < 4:
            return None
        if goldbach[N - r]:
            return r
    return None


@dataclass
class GapReport:
    minimal: dict[int, int | None]
    max_min_p3: int | None
    violations: list[int]


def gap_scan(N_lo: int, N_hi: int, U_rule: Rule) -> GapReport:
    """Minimal restricted prime for each odd N in [N_lo, N_hi] against U_rule(N)."""
    if N_hi < N_lo:
        raise ValueError(f"empty range [{N_lo}, {N_hi}]")
    g = goldbach_bitmap(N_hi)
    primes = sieve_range(0, N_hi)
    minimal: dict[int, int | None] = {}
    violations = []
    start = N_lo if N_lo % 2 else N_lo + 1
    for N in range(start, N_hi + 1, 2):
        m = minimal_p3(N, g, primes)
        minimal[N] = m
        if m is None or m > U_rule(N):
            violations.append(N)
    found = [m for m in minimal.values() if m is not None]
    return GapReport(minimal, max(found) if found else None, violations)
