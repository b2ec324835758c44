"""Command-line interface: ``esbgk {cnu-table,verify,simulate}``.

Exit codes: 0 success, 1 property or simulation failure, 2 usage or
config error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import verification
from .errors import DomainError, PositivityLoss
from .relaxation_sim import SimConfig, run
from .scalar_analysis import Maximizer, compute_cnu

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
X_SENTINEL = -1.0


@dataclass(frozen=True)
class ReportRow:
    nu: float
    c_nu: float
    closed_bound: float
    legacy_bound: float
    x_nu: float


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def cnu_table(nu_min: float, nu_max: float, steps: int) -> list[ReportRow]:
    if not (-0.5 <= nu_min < nu_max < 1.0) or steps < 2:
        raise DomainError("need -1/2 <= nu_min < nu_max < 1 and steps >= 2")
    rows = []
    for nu in np.linspace(nu_min, nu_max, steps):
        nu = 0.0 if abs(nu) < 1e-14 else float(nu)
        r = compute_cnu(nu)
        x = r.x_nu if r.maximizer is Maximizer.INTERIOR else X_SENTINEL
        rows.append(ReportRow(nu, r.value, r.closed_bound, r.legacy_bound, x))
    return rows


def cmd_cnu_table(args) -> int:
    rows = cnu_table(args.nu_min, args.nu_max, args.steps)
    _write_csv(
        args.out,
        ["nu", "c_nu", "closed_bound", "legacy_bound", "x_nu"],
        [(r.nu, r.c_nu, r.closed_bound, r.legacy_bound, r.x_nu) for r in rows],
    )
    bad = [
        r for r in rows
        if r.c_nu > r.closed_bound + 1e-9 or r.closed_bound > r.legacy_bound + 1e-9
    ]
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_FAIL if bad else EXIT_OK


def cmd_verify(args) -> int:
    suite = verification.SUITES[args.suite]
    kw = {} if args.samples is None else {"samples": args.samples}
    rows = suite(args.seed, **kw)
    header = list(rows[0])
    _write_csv(args.out, header, [[r[k] for k in header] for r in rows])
    failed = sum(not r["passed"] for r in rows)
    worst = min(r["margin"] for r in rows)
    print(f"{args.suite}: {len(rows)} cases, {failed} failed, min margin {worst:.3e}")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_simulate(args) -> int:
    try:
        cfg = SimConfig.from_json(args.config)
    except PositivityLoss as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        series = run(cfg)
    except PositivityLoss as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    series.to_csv(args.out)
    print(f"wrote {len(series.times)} records to {args.out}")
    print(f"A_nu = {series.A:.6g}")
    print(f"measured decay rate of H(f|M0) = {series.decay_rate():.6g}")
    print(f"entropy-production envelope rate (1 - C_nu) A_nu = {series.envelope_rate:.6g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="esbgk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("cnu-table", help="C_nu, closed-form and legacy bounds over a nu range")
    t.add_argument("--nu-min", type=float, default=-0.5)
    t.add_argument("--nu-max", type=float, default=0.99)
    t.add_argument("--steps", type=int, default=150)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_cnu_table)

    v = sub.add_parser("verify", help="run a property suite and write per-case margins")
    v.add_argument("--suite", required=True, choices=sorted(verification.SUITES))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=None)
    v.add_argument("--out", required=True)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="integrate the homogeneous relaxation from a JSON config")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "samples", None) is not None and args.samples < 1:
        parser.error("--samples must be >= 1")
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
