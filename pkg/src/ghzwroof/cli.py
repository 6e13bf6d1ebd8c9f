"""Command-line front end: ``ghzwroof <command> [options]``.

Commands emit JSON (default) or CSV on stdout or ``--out``. Exit codes:
0 success, 1 verification failure, 2 bad arguments, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Sequence

import numpy as np

from .checks import run_checks
from .core import GhzwRay, NumericalContractError
from .measures import MeasureKind, measure_pure_batch, pi_pure, tangle_closed
from .oracle import oracle_search
from .roof import (
    TANGLE_Q_STAR0,
    TANGLE_Q_STAR1,
    find_critical_points,
    mixed_closed,
    roof_evaluate,
)

EXIT_OK, EXIT_VERIFY, EXIT_ARGS, EXIT_NUMERIC = 0, 1, 2, 3


def num(x: float) -> float:
    """Round to 12 significant digits (and drop negative zero)."""
    v = float(f"{float(x):.12g}")
    return 0.0 if v == 0.0 else v


def _kinds(measure: str) -> list[MeasureKind]:
    return list(MeasureKind) if measure == "both" else [MeasureKind.parse(measure)]


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def render(rows: list[dict] | dict, fmt: str) -> str:
    """A record (dict) or table (list of dicts) as JSON or CSV text."""
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    table = [rows] if isinstance(rows, dict) else rows
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(table[0].keys()) if table else []
    writer.writerow(header)
    for row in table:
        writer.writerow([_cell(row[k]) for k in header])
    return buf.getvalue()


def _unit(parser: argparse.ArgumentParser, name: str, x: float) -> float:
    if not (math.isfinite(x) and 0.0 <= x <= 1.0):
        parser.error(f"--{name} must lie in [0, 1], got {x}")
    return x


def _theta(args, x: float) -> float:
    return math.radians(x) if args.degrees else x


# --- commands ----------------------------------------------------------------


def cmd_pure(args, parser):
    q = _unit(parser, "q", args.q)
    theta = _theta(args, args.theta)
    if not math.isfinite(theta):
        parser.error("--theta must be finite")
    ray = GhzwRay(q, theta)
    rec = {"q": num(q), "theta": num(theta)}
    for kind in _kinds(args.measure):
        rec[kind.value] = num(tangle_closed(ray) if kind is MeasureKind.TANGLE else pi_pure(ray))
    return rec


def cmd_mixed(args, parser):
    p = _unit(parser, "p", args.p)
    rec: dict[str, Any] = {"p": num(p)}
    kinds = _kinds(args.measure)
    if len(kinds) == 1:
        rec["measure"] = kinds[0].value
    for kind in kinds:
        key = "value" if len(kinds) == 1 else kind.value
        rec[key] = num(mixed_closed(kind, p))
        rec["branch" if len(kinds) == 1 else f"{kind.value}_branch"] = roof_evaluate(kind, p)[1]
    return rec


def cmd_critical(args, parser):
    rows = []
    for kind in _kinds(args.measure):
        cp = find_critical_points(kind)
        rec: dict[str, Any] = {
            "measure": kind.value,
            "q_star0": num(cp.q_star0),
            "q_star1": num(cp.q_star1),
            "theta_star": num(cp.theta_star),
        }
        if kind is MeasureKind.TANGLE:
            rec["q_star0_analytic"] = num(TANGLE_Q_STAR0)
            rec["q_star1_analytic"] = num(TANGLE_Q_STAR1)
            rec["delta0"] = num(cp.q_star0 - TANGLE_Q_STAR0)
            rec["delta1"] = num(cp.q_star1 - TANGLE_Q_STAR1)
        rows.append(rec)
    if args.format == "csv" and len(rows) > 1:
        keys = list(rows[0].keys())
        rows = [{k: r.get(k, "") for k in keys} for r in rows]
    return rows[0] if len(rows) == 1 else rows


def _sweep(parser, start, stop, steps, name, bounds=(0.0, 1.0)):
    if steps < 2:
        parser.error(f"--{name}steps must be at least 2")
    if not start < stop:
        parser.error(f"--{name}start must be below --{name}stop")
    lo, hi = bounds
    if start < lo or stop > hi:
        parser.error(f"{name or 'sweep'} range must lie in [{lo:g}, {hi:g}]")
    return np.linspace(start, stop, steps)


def cmd_surface(args, parser):
    qs = _sweep(parser, args.start, args.stop, args.steps, "")
    t0, t1 = _theta(args, args.theta_start), _theta(args, args.theta_stop)
    ts = _sweep(parser, t0, t1, args.theta_steps, "theta-", (-math.inf, math.inf))
    q, t = np.meshgrid(qs, ts, indexing="ij")
    tau = measure_pure_batch(MeasureKind.TANGLE, q, t)
    pi = measure_pure_batch(MeasureKind.PI, q, t)
    if np.any(pi < tau - 1e-10):
        raise NumericalContractError("three-pi fell below three-tangle on the surface grid")
    return [
        {"q": num(a), "theta": num(b), "tangle": num(c), "pi": num(d)}
        for a, b, c, d in zip(q.ravel(), t.ravel(), tau.ravel(), pi.ravel())
    ]


def cmd_sweep(args, parser):
    ps = _sweep(parser, args.start, args.stop, args.steps, "")
    return [
        {"p": num(p), "tangle": num(mixed_closed(MeasureKind.TANGLE, p)), "pi": num(mixed_closed(MeasureKind.PI, p))}
        for p in ps
    ]


def cmd_oracle(args, parser):
    p = _unit(parser, "p", args.p)
    if args.restarts < 1:
        parser.error("--restarts must be positive")
    rows = []
    for kind in _kinds(args.measure):
        res = oracle_search(kind, p, args.n_states, args.restarts, args.seed)
        closed = mixed_closed(kind, p)
        head = {
            "p": num(p),
            "measure": kind.value,
            "n_states": args.n_states,
            "restarts": args.restarts,
            "seed": args.seed,
            "value": num(res.value),
            "closed_form": num(closed),
            "gap": num(res.value - closed),
        }
        ensemble = [{"weight": num(w), "q": num(r.q), "theta": num(r.theta)} for w, r in res.ensemble]
        diag = {"restarts_used": res.restarts_used, "converged": res.converged}
        if args.format == "json":
            rows.append({**head, "ensemble": ensemble, **diag})
        else:
            rows.extend({**head, **{f"state_{k}": v for k, v in e.items()}, **diag} for e in ensemble)
    if args.format == "json" and len(rows) == 1:
        return rows[0]
    return rows


def cmd_verify(args, parser):
    results = run_checks()
    return [{"check": r.name, "passed": r.passed, "detail": r.detail} for r in results]


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write output to this path instead of stdout")
    common.add_argument("--degrees", action="store_true", help="read theta inputs in degrees")

    parser = argparse.ArgumentParser(
        prog="ghzwroof",
        description="Three-tangle and three-pi of GHZ/W superpositions and mixtures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    measure3 = ("tangle", "pi", "both")

    p = sub.add_parser("pure", parents=[common], help="measures of sqrt(q)|GHZ> - sqrt(1-q)e^{i theta}|W>")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--measure", choices=measure3, default="both")
    p.set_defaults(func=cmd_pure)

    p = sub.add_parser("mixed", parents=[common], help="roof value for p|GHZ><GHZ| + (1-p)|W><W|")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--measure", choices=measure3, default="both")
    p.set_defaults(func=cmd_mixed)

    p = sub.add_parser("critical", parents=[common], help="critical points q*0, q*1 of the roof")
    p.add_argument("--measure", choices=measure3, default="both")
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("surface", parents=[common], help="pure-state measures on a (q, theta) grid")
    p.add_argument("--start", type=float, default=0.0, help="first q")
    p.add_argument("--stop", type=float, default=1.0, help="last q")
    p.add_argument("--steps", type=int, default=101, help="number of q values")
    p.add_argument("--theta-start", type=float, default=0.0)
    p.add_argument("--theta-stop", type=float, default=2 * math.pi)
    p.add_argument("--theta-steps", type=int, default=121)
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("sweep", parents=[common], help="mixture roof values on a p grid")
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--stop", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=1001)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", parents=[common], help="brute-force decomposition search")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--measure", choices=measure3, default="tangle")
    p.add_argument("--n-states", type=int, choices=(2, 3, 4), default=4)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", parents=[common], help="run the invariant checks")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except NumericalContractError as exc:
        print(f"ghzwroof: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"ghzwroof: {exc}", file=sys.stderr)
        return EXIT_ARGS

    text = render(result, args.format)
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if args.command == "verify" and not all(r["passed"] for r in result):
        return EXIT_VERIFY
    return EXIT_OK
