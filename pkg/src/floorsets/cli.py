"""Command-line interface.

Exit codes: 0 success, 1 internal error, 2 usage error, 3 bound violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from collections.abc import Sequence
from contextlib import contextmanager
from dataclasses import asdict

import numpy as np

from . import expsum, floorset, primes, progression, vaaler
from .config import DEFAULT_C, DEFAULT_MAX_RESIDUES, ScanConfig, parse_int, parse_int_list
from .progression import ProgressionQuery, normalize_residue

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_VIOLATION = 3

SCAN_COLUMNS = ["x", "q", "a", "count", "main_term", "raw_error", "normalized_error"]
DECOMPOSE_COLUMNS = ["x", "q", "a", "s1", "s2", "s21", "s22_0", "s22_1", "boundary_correction", "count"]
VAALER_COLUMNS = ["H", "t", "psi", "approx", "error", "bound", "slack"]
EXPSUM_COLUMNS = [
    "x", "q", "a", "delta", "D", "D_prime", "empirical",
    "term1", "term2", "term3", "bound_total", "ratio_bound", "ratio_reduced",
]
PRIMES_COLUMNS = ["x", "pi_s", "li_s", "heyman_main", "ratio"]
BENCH_COLUMNS = ["op", "x", "seconds"]

VAALER_SLACK = 2.0**-40


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


@contextmanager
def _open_output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def emit_rows(rows: list[dict], columns: Sequence[str], fmt: str, path: str | None) -> None:
    with _open_output(path) as fh:
        if fmt == "json":
            clean = [{k: (float(r[k]) if isinstance(r[k], np.floating) else r[k]) for k in columns} for r in rows]
            json.dump(clean, fh)
            fh.write("\n")
            return
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_fmt(r[k]) for k in columns])


def _report_row(rep: progression.ProgressionReport) -> dict:
    return {**asdict(rep.query), **{k: getattr(rep, k) for k in SCAN_COLUMNS[3:]}}


def _query(x: int, q: int, a: int) -> ProgressionQuery:
    if q < 1:
        raise UsageError(f"q must be >= 1, got {q}")
    if not 0 <= a <= q:
        raise UsageError(f"a must satisfy 0 <= a <= q, got a={a}")
    return ProgressionQuery(x, q, normalize_residue(q, a))


def cmd_enumerate(args: argparse.Namespace) -> int:
    fs = floorset.enumerate_floor_set(args.x)
    formula = floorset.cardinality_exact(args.x)
    with _open_output(args.output) as fh:
        if args.format == "json":
            json.dump(fs.tolist(), fh)
            fh.write("\n")
        else:
            fh.writelines(f"{v}\n" for v in fs.tolist())
    print(f"count={len(fs)} formula={formula}", file=sys.stderr)
    if len(fs) != formula:
        raise RuntimeError("floor set size disagrees with isqrt(4x+1) - 1")
    return EXIT_OK


def cmd_count(args: argparse.Namespace) -> int:
    rep = progression.count_progression(_query(args.x, args.q, args.a))
    emit_rows([_report_row(rep)], SCAN_COLUMNS, args.format, args.output)
    return EXIT_OK


def cmd_decompose(args: argparse.Namespace) -> int:
    query = _query(args.x, args.q, args.a)
    dec = progression.decompose(query)
    row = {**asdict(query), **{k: getattr(dec, k) for k in DECOMPOSE_COLUMNS[3:-1]}}
    row["count"] = progression.count_progression(query).count
    if dec.s1 + dec.s2 + dec.boundary_correction != row["count"]:
        raise RuntimeError("decomposition does not reproduce the exact count")
    emit_rows([row], DECOMPOSE_COLUMNS, args.format, args.output)
    return EXIT_OK


def scan_config_from_args(args: argparse.Namespace) -> ScanConfig:
    policy = args.q_policy
    q_values: list[int] = []
    if policy.startswith("list:"):
        q_values, policy = parse_int_list(policy[5:]), "explicit"
    elif policy.startswith("single:"):
        q_values, policy = [parse_int(policy[7:])], "single"
    elif policy != "paper_range":
        raise UsageError(f"unknown q policy {args.q_policy!r}")
    a_values = [] if args.a_policy == "all" else parse_int_list(args.a_policy.removeprefix("list:"))
    return ScanConfig(
        x_grid=parse_int_list(args.x_grid),
        q_policy=policy,
        q_values=q_values,
        a_policy="all" if args.a_policy == "all" else "explicit",
        a_values=a_values,
        max_residues=args.max_residues or None,
        constant_C=args.constant_C,
        threads=args.threads or os.cpu_count() or 1,
        output_path=args.output,
        output_format=args.format,
    )


def run_scan(cfg: ScanConfig) -> tuple[list[progression.ProgressionReport], float]:
    reports = progression.scan_errors(
        cfg.x_grid,
        q_policy=cfg.moduli,
        a_policy=cfg.residues,
        max_residues=cfg.max_residues,
        workers=cfg.threads,
    )
    worst = max((abs(r.normalized_error) for r in reports), default=0.0)
    return reports, worst


def cmd_scan(args: argparse.Namespace) -> int:
    cfg = scan_config_from_args(args)
    reports, worst = run_scan(cfg)
    emit_rows([_report_row(r) for r in reports], SCAN_COLUMNS, cfg.output_format, cfg.output_path)
    print(f"reports={len(reports)} max_abs_normalized_error={worst!r} C={cfg.constant_C!r}", file=sys.stderr)
    return EXIT_OK if worst <= cfg.constant_C else EXIT_VIOLATION


def cmd_vaaler_check(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(args.seed)
    rows = []
    breach = False
    for H in parse_int_list(args.H):
        poly = vaaler.VaalerPolynomial(H)
        t = rng.random(args.samples)
        p = vaaler.psi(t)
        approx = vaaler.vaaler_approx(poly, t)
        bound = vaaler.remainder_bound(poly, t)
        err = np.abs(p - approx)
        slack = bound - err
        breach |= bool(np.any(slack < -VAALER_SLACK))
        rows.extend(
            dict(H=H, t=t[i], psi=p[i], approx=approx[i], error=err[i], bound=bound[i], slack=slack[i])
            for i in range(t.size)
        )
    emit_rows(rows, VAALER_COLUMNS, args.format, args.output)
    print(f"rows={len(rows)} breach={breach}", file=sys.stderr)
    return EXIT_VIOLATION if breach else EXIT_OK


def expsum_rows(x_grid: Sequence[int], q_values: Sequence[int], C: float) -> list[dict]:
    """Every dyadic window for a = 1, a = q and both delta, per (x, q)."""
    rows = []
    for x in x_grid:
        for q in q_values:
            for a in sorted({1, q}):
                for delta in (0, 1):
                    for lo, hi in expsum.dyadic_windows(x, q, a):
                        emp = expsum.psi_sum(x, q, a, delta, math.floor(lo) + 1, math.floor(hi))
                        b = expsum.exponent_pair_bound(x, q, max(lo, 1.0))
                        rows.append(dict(
                            x=x, q=q, a=a, delta=delta, D=lo, D_prime=hi, empirical=emp,
                            term1=b.term1, term2=b.term2, term3=b.term3, bound_total=b.total,
                            ratio_bound=abs(emp) / (C * b.total),
                            ratio_reduced=abs(emp) / (C * (x / q) ** (1.0 / 3.0)),
                        ))
    return rows


def cmd_expsum_check(args: argparse.Namespace) -> int:
    rows = expsum_rows(parse_int_list(args.x_grid), parse_int_list(args.q), args.constant_C)
    emit_rows(rows, EXPSUM_COLUMNS, args.format, args.output)
    worst = max((max(r["ratio_bound"], r["ratio_reduced"]) for r in rows), default=0.0)
    print(f"windows={len(rows)} max_ratio={worst!r}", file=sys.stderr)
    return EXIT_OK if worst <= 1.0 else EXIT_VIOLATION


def cmd_primes(args: argparse.Namespace) -> int:
    rows = []
    for x in parse_int_list(args.x):
        rep = primes.prime_count_report(x, args.tol)
        rows.append(asdict(rep))
    emit_rows(rows, PRIMES_COLUMNS, args.format, args.output)
    breach = any(r["li_s"] <= 0 for r in rows)
    return EXIT_VIOLATION if breach else EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    rows = []
    ops = {
        "enumerate": lambda x: floorset.enumerate_floor_set(x),
        "count": lambda x: progression.progression_count(x, 3, 1),
        "decompose": lambda x: progression.decompose(ProgressionQuery(x, 3, 1)),
        "pi_s": lambda x: primes.pi_s(x),
    }
    for x in parse_int_list(args.x):
        for name, fn in ops.items():
            start = time.perf_counter()
            fn(x)
            rows.append(dict(op=name, x=x, seconds=time.perf_counter() - start))
    emit_rows(rows, BENCH_COLUMNS, args.format, args.output)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="floorsets", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--output", default=None, help="file path; stdout when omitted")

    p = sub.add_parser("enumerate", help="list the floor set of x")
    p.add_argument("--x", type=parse_int, required=True)
    common(p)
    p.set_defaults(func=cmd_enumerate)

    for name, func, helptext in [
        ("count", cmd_count, "S(x; q, a) with main term and errors"),
        ("decompose", cmd_decompose, "split S(x; q, a) into its exact parts"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--x", type=parse_int, required=True)
        p.add_argument("--q", type=parse_int, required=True)
        p.add_argument("--a", type=parse_int, required=True, help="residue; 0 is read as q")
        common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("scan", help="normalized error scan over a grid")
    p.add_argument("--x-grid", required=True, help="e.g. 10^4,10^5,10^6")
    p.add_argument("--q-policy", default="paper_range", help="paper_range | list:1,2,5 | single:3")
    p.add_argument("--a-policy", default="all", help="all | list:1,2")
    p.add_argument("--max-residues", type=int, default=DEFAULT_MAX_RESIDUES, help="0 disables the cap")
    p.add_argument("--constant-C", type=float, default=DEFAULT_C)
    p.add_argument("--threads", type=int, default=0, help="worker processes; 0 means all CPUs")
    common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("vaaler-check", help="pointwise remainder bound on random samples")
    p.add_argument("--H", default="10,100")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_vaaler_check)

    p = sub.add_parser("expsum-check", help="sawtooth sums on dyadic windows against their bounds")
    p.add_argument("--x-grid", default="10^4,10^5,10^6,10^7")
    p.add_argument("--q", default="1,2,3")
    p.add_argument("--constant-C", type=float, default=DEFAULT_C)
    common(p)
    p.set_defaults(func=cmd_expsum_check)

    p = sub.add_parser("primes", help="primes in the floor set against Li_S")
    p.add_argument("--x", default="10^6")
    p.add_argument("--tol", type=float, default=1e-9)
    common(p)
    p.set_defaults(func=cmd_primes)

    p = sub.add_parser("bench", help="time the main kernels")
    p.add_argument("--x", default="10^8,10^10,10^12")
    common(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (UsageError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
