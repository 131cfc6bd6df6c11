"""Command-line frontend.

Every subcommand accepts ``--format {json,csv,human}``. JSON output is one
object per line; CSV uses a fixed header per subcommand; floats are written
with 17 significant digits. Exit status is 0 on success, 2 on usage errors
and 1 on computation errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from typing import Iterable, Sequence

from . import arcs, circle, count, expsum, primes, singular, verify
from .arith import reduce

HEADERS = {
    "primes": ["p"],
    "expsum": ["x", "h", "a", "q", "beta", "re", "im"],
    "arcs": ["a", "q", "radius_num", "radius_den"],
    "singular": ["N", "route", "cutoff", "value", "tail_bound"],
    "count": ["N", "y", "U", "unweighted", "weighted"],
    "circle": ["total", "major", "minor", "main_term", "M"],
    "ratio-sweep": verify.SWEEP_HEADER,
    "gap-scan": ["N", "min_p3", "U", "ok"],
}


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g") if math.isfinite(v) else ""
    return str(v)


def _json_value(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g") if math.isfinite(v) else "null"
    return json.dumps(v, separators=(",", ":"))


def emit(records: Iterable[dict], fmt: str, header: Sequence[str]) -> str:
    """Serialize homogeneous records; CSV always carries the header line."""
    records = list(records)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for rec in records:
            w.writerow([format_value(rec.get(k)) for k in header])
        return buf.getvalue()
    if fmt == "json":
        lines = ["{" + ",".join(f"{json.dumps(k)}:{_json_value(v)}" for k, v in rec.items()) + "}" for rec in records]
        return "".join(line + "\n" for line in lines)
    lines = ["  ".join(f"{k}={format_value(v)}" for k, v in rec.items()) for rec in records]
    return "".join(line + "\n" for line in lines)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _int_list(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list: {text!r}")


def _rule(text: str) -> verify.Rule:
    try:
        return verify.parse_rule(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "human"], default="human")
    common.add_argument("--sieve-cap", type=int, default=None, help="sieve cap (env GOLDBACH_SIEVE_CAP)")
    common.add_argument("--sieve-cache", default=None, help="binary prime cache (env GOLDBACH_SIEVE_CACHE)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="goldbach", description="Restricted ternary Goldbach numerics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("primes", parents=[common], help="primes in (lo, hi]")
    p.add_argument("--lo", type=int, default=0)
    p.add_argument("--hi", type=int, required=True)

    p = sub.add_parser("expsum", parents=[common], help="S(x, h, a/q + beta)")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--beta", type=float, default=0.0)

    p = sub.add_parser("arcs", parents=[common], help="major-arc dissection")
    p.add_argument("--p", type=_fraction, required=True)
    p.add_argument("--q", type=_fraction, required=True)

    p = sub.add_parser("singular", parents=[common], help="singular series")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--route", choices=["series", "euler", "both"], default="both")
    p.add_argument("--cutoff", type=float, default=1000.0, help="P for the series, prime cutoff for the product")
    p.add_argument("--scan", type=_int_list, default=None, help="ascending P list, e.g. 100,1000,10000")

    p = sub.add_parser("count", parents=[common], help="restricted representation counts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--emit-triples", action="store_true")

    p = sub.add_parser("circle", parents=[common], help="discrete circle method")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--p", type=_fraction, default=None)
    p.add_argument("--q", type=_fraction, default=None)
    p.add_argument("--sup-samples", type=int, default=0,
                   help="seeded samples per minor-cover arc for a sup |S(U, U, .)| scan (needs --p, --q)")

    p = sub.add_parser(
        "ratio-sweep",
        parents=[common],
        help="count / main-term sweep",
        description="Config keys (key = value): n_grid, y_rule, u_rule, output, timing, threads. "
        "Rules: fraction:c, power:{N,y}:t, logpow:{N,y}:k, density:A:eps, bound:A:eps, grh:eps, const:v.",
    )
    p.add_argument("--config", default=None, help="key = value file")
    p.add_argument("--n-grid", default=None, help="comma list of N")
    p.add_argument("--y-rule", type=_rule, default=None)
    p.add_argument("--u-rule", type=_rule, default=None)
    p.add_argument("--output", default=None)
    p.add_argument("--timing", action="store_true", help="fill the ms column (non-deterministic)")

    p = sub.add_parser("gap-scan", parents=[common], help="minimal restricted prime per odd N")
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)
    p.add_argument("--u-rule", type=_rule, default=verify.parse_rule("logpow:N:4"))
    p.add_argument("--summary", action="store_true", help="emit only the JSON summary")
    return parser


def _run(args: argparse.Namespace) -> tuple[list[dict], list[dict]]:
    """Records for stdout plus optional trailing summary records."""
    cmd = args.command
    if cmd == "primes":
        return [{"p": int(v)} for v in primes.sieve_range(args.lo, args.hi)], []
    if cmd == "expsum":
        w = primes.make_window(args.x, args.h)
        c = reduce(args.a, args.q)
        beta = expsum.normalize_beta(args.beta)
        s = expsum.eval_S(w, expsum.UnitPoint.tagged(c, beta))
        return [{"x": args.x, "h": args.h, "a": c.a, "q": c.q, "beta": beta, "re": s.real, "im": s.imag}], []
    if cmd == "arcs":
        d = arcs.build_dissection(args.p, args.q, minor=False)
        recs = [
            {"a": a.center.a, "q": a.center.q, "radius_num": a.radius.numerator, "radius_den": a.radius.denominator}
            for a in d.major
        ]
        rep = arcs.check_disjoint(d)
        summary = {"arcs": len(d.major), "disjoint": rep.ok, "within_unit": arcs.check_within_unit(d)}
        return recs, [summary]
    if cmd == "singular":
        N = args.n
        recs = []
        if args.scan:
            scan = singular.truncation_decay_scan(N, args.scan)
            for P, e in zip(scan.P, scan.errors):
                recs.append({"N": N, "route": "truncated_series", "cutoff": P,
                             "value": singular.singular_truncated(N, P).value, "tail_bound": e})
            return recs, [{"N": N, "reference": scan.reference.value, "slope": scan.slope}]
        if args.route in ("series", "both"):
            v = singular.singular_truncated(N, args.cutoff)
            recs.append({"N": N, "route": v.route, "cutoff": v.cutoff, "value": v.value, "tail_bound": v.tail_bound})
        if args.route in ("euler", "both"):
            v = singular.singular_euler(N, int(args.cutoff))
            recs.append({"N": N, "route": v.route, "cutoff": v.cutoff, "value": v.value, "tail_bound": v.tail_bound})
        return recs, []
    if cmd == "count":
        rc = count.count_reps(count.Params(args.n, args.y, args.u), keep_triples=args.emit_triples)
        rec = {"N": args.n, "y": args.y, "U": args.u, "unweighted": rc.unweighted, "weighted": rc.weighted}
        extra = []
        if args.emit_triples:
            extra = [{"p1": a, "p2": b, "p3": c} for a, b, c in (rc.triples or [])]
        return [rec], extra
    if cmd == "circle":
        par = count.Params(args.n, args.y, args.u)
        g = circle.GridSpec(args.m) if args.m else circle.default_grid(par)
        rec = {"total": circle.discrete_circle(par, g), "major": None, "minor": None, "main_term": None, "M": g.M}
        if args.p is not None and args.q is not None:
            split = circle.split_R(par, arcs.build_dissection(args.p, args.q, minor=False), g)
            rec.update(major=split.major, minor=split.minor, main_term=circle.major_main_term(par, args.p))
        extra = []
        if args.sup_samples:
            if args.p is None or args.q is None:
                raise ValueError("--sup-samples needs --p and --q")
            scan = circle.minor_sup_scan(args.u, arcs.build_dissection(args.p, args.q), args.sup_samples, seed=args.seed)
            extra = [{"max_abs": scan.max_abs, "weyl_shape": scan.weyl_shape, "arcs": scan.arcs,
                      "samples": scan.samples, "seed": args.seed}]
        return [rec], extra
    if cmd == "ratio-sweep":
        if args.config:
            with open(args.config) as fh:
                cfg = verify.load_config(fh.read())
        else:
            cfg = verify.SweepConfig([])
        if args.n_grid is not None:
            cfg.N_grid = [int(s) for s in args.n_grid.split(",") if s.strip()]
        if args.y_rule is not None:
            cfg.y_rule = args.y_rule
        if args.u_rule is not None:
            cfg.U_rule = args.u_rule
        if args.output is not None:
            cfg.output = args.output
        cfg.timing = cfg.timing or args.timing
        cfg.threads = args.threads
        rows, failures = verify.ratio_sweep(cfg)
        summary = {"rows": len(rows), "failures": [{"N": n, "error": e} for n, e in failures]}
        return rows, [summary]
    if cmd == "gap-scan":
        rep = verify.gap_scan(args.lo, args.hi, args.u_rule)
        summary = {"checked": len(rep.minimal), "max_min_p3": rep.max_min_p3, "violations": rep.violations,
                   "u_rule": str(args.u_rule)}
        if args.summary:
            return [], [summary]
        recs = [{"N": N, "min_p3": m, "U": args.u_rule(N), "ok": N not in rep.violations} for N, m in rep.minimal.items()]
        return recs, [summary]
    raise AssertionError(cmd)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors itself
        return int(exc.code or 0)
    primes.configure(cap=args.sieve_cap, cache=args.sieve_cache)
    try:
        if args.command == "primes" and args.sieve_cache and not os.path.exists(args.sieve_cache):
            primes.write_cache(args.sieve_cache, args.lo, args.hi)
        records, extra = _run(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"goldbach {args.command}: error: {exc}", file=stderr)
        return 1
    finally:
        primes.configure()
    header = HEADERS[args.command]
    if args.format == "csv":
        stdout.write(emit(records, "csv", header))
        if extra:
            stderr.write(emit(extra, "json", []))
    else:
        stdout.write(emit(records + extra, args.format, header))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
