"""Command line entry point: ``vvforms eval | verify | report``."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import harness, theta


def load_point(path: str) -> np.ndarray:
    """Read a hermitian point: {"z11": [re, im], "z12": ..., "z21": ..., "z22": ...}."""
    with open(path) as fh:
        data = json.load(fh)
    try:
        vals = [complex(*data[k]) for k in ("z11", "z12", "z21", "z22")]
    except KeyError as exc:
        raise ValueError(f"point file lacks coordinate {exc}") from None
    return np.array(vals).reshape(2, 2)


def _cmd_eval(args) -> int:
    chars = theta.characteristic_table(args.case)
    if not 1 <= args.theta <= len(chars):
        print(f"--theta must be in 1..{len(chars)}", file=sys.stderr)
        return 2
    policy = theta.TruncationPolicy(tail_bound=args.tol) if args.tol else theta.DEFAULT_POLICY
    Z = load_point(args.point)
    try:
        value = theta.theta_eval(chars[args.theta - 1], Z, policy)
    except theta.TruncationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"{value.real:.15e} {value.imag:+.15e}j")
    return 0


def _cmd_verify(args) -> int:
    data = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
    for key in ("seed", "suites", "checks", "tol_scale"):
        val = getattr(args, key)
        if val is not None:
            data[key] = val
    try:
        config = harness.RunConfig.from_mapping(data)
        report = harness.run_suite(config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = harness.dumps_report(report)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    print(harness.format_report(report))
    return 0 if report["passed"] else 1


def _cmd_report(args) -> int:
    with open(args.input) as fh:
        report = json.load(fh)
    if args.format == "json":
        print(harness.dumps_report(report))
    else:
        print(harness.format_report(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vvforms")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate a theta constant at a point")
    e.add_argument("--case", choices=[theta.EISENSTEIN, theta.GAUSS], required=True)
    e.add_argument("--theta", type=int, required=True, help="1-based index into the characteristic table")
    e.add_argument("--point", required=True, help="JSON file with z11, z12, z21, z22 as [re, im]")
    e.add_argument("--tol", type=float, help="absolute tail bound")
    e.set_defaults(func=_cmd_eval)

    v = sub.add_parser("verify", help="run verification checks")
    v.add_argument("--suite", dest="suites", action="append", choices=harness.SUITES)
    v.add_argument("--check", dest="checks", action="append")
    v.add_argument("--seed", type=int)
    v.add_argument("--tol-scale", dest="tol_scale", type=float)
    v.add_argument("--report", help="write the JSON report here")
    v.add_argument("--config", help="JSON config with seed, suites, checks, tol_scale")
    v.set_defaults(func=_cmd_verify)

    r = sub.add_parser("report", help="summarise a saved report")
    r.add_argument("--input", required=True)
    r.add_argument("--format", choices=["text", "json"], default="text")
    r.set_defaults(func=_cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
