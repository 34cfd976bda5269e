"""Command-line front end: ``skewlab --command extract --gauge lp:4 --dim 3 --seed 7``."""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError
from .harness import COMMANDS, RunConfig, run


def _vector(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.replace("[", "").replace("]", "").split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad vector {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skewlab", description=__doc__)
    p.add_argument("--command", choices=COMMANDS, default="all")
    p.add_argument("--gauge", default="lp:4", help="gauge text form, e.g. lp:2, orlicz:exppow:2, lorentz:log")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=None,
                   help="override the tolerance of every upper-bound check")
    p.add_argument("--vector", type=_vector, default=None, help="fixture vector for norms, e.g. 1,1")
    p.add_argument("--out", metavar="PATH.json")
    p.add_argument("--csv", metavar="PATH.csv")
    p.add_argument("--no-timing", action="store_true", help="omit wall-clock seconds from the JSON report")
    p.add_argument("--quiet", action="store_true", help="suppress the table on stdout")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(command=args.command, gauge=args.gauge, dim=args.dim, trials=args.trials,
                       seed=args.seed, tolerance=args.tolerance, vector=args.vector)
    try:
        report = run(config)
    except ConfigError as exc:
        print(f"skewlab: {exc}", file=sys.stderr)
        return 2
    if not args.quiet:
        print(report.table())
        if "dichotomy" in report.extras and args.command == "dichotomy":
            print()
            print(f"dichotomy (n={config.dim}): {'PASS' if report.passed else 'FAIL'}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.dumps(timing=not args.no_timing) + "\n")
    if args.csv:
        report.write_csv(args.csv)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
