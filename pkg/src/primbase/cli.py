"""Command line front end.

    primbase sweep CONFIG [--format csv|json|table] [--out PATH]
    primbase family SPEC [--format ...]
    primbase chains
    primbase selftest

Exit status: 0 on success, 1 when a sweep hits an unexpected failure
(or a chain violation, or a selftest mismatch), 2 on usage and config
errors.  Worker count for the scan kernels comes from PRIMBASE_THREADS.
"""

from __future__ import annotations

import argparse
import sys

from . import verifier
from .families import parse_spec


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_sweep(args) -> int:
    try:
        config = verifier.load_config(args.config)
    except OSError as exc:
        print(f"primbase: cannot read config: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"primbase: bad config: {exc}", file=sys.stderr)
        return 2
    records, summary = verifier.run_sweep(config)
    fmt = args.format or config.fmt
    _write(verifier.report(records, fmt, summary), args.out)
    return 1 if summary["unexpected_failures"] else 0


def _cmd_family(args) -> int:
    try:
        sp = parse_spec(args.spec)
    except ValueError as exc:
        print(f"primbase: bad spec: {exc}", file=sys.stderr)
        return 2
    record = verifier.evaluate_spec(sp)
    fmt = args.format or "table"
    _write(verifier.report([record], fmt), args.out)
    if record.status != "ok":
        return 2
    return 1 if record.unexpected_failure else 0


def _cmd_chains(args) -> int:
    lines, failures = verifier.check_inequality_chains()
    _write("\n".join(lines) + "\n", args.out)
    return 1 if failures else 0


SELFTEST_ROWS = (
    ("Affine(d=3,q=2)", {"n": 8, "b": 4, "mu": 4}),
    ("LinearOnPk(d=3,k=1,q=2)", {"n": 7, "mu": 4}),
    ("SymPartitions(a=2,b=3)", {"n": 15, "b": 4}),
)


def _cmd_selftest(args) -> int:
    problems: list[str] = []
    for text, expected in SELFTEST_ROWS:
        record = verifier.evaluate_spec(parse_spec(text))
        if record.status != "ok":
            problems.append(f"{text}: {record.reason}")
            continue
        for key, value in expected.items():
            got = getattr(record, key)
            if got != value:
                problems.append(f"{text}: {key} = {got}, expected {value}")
        for name, verdict in zip(("thm1", "thm2", "lower_bound"), record.verdicts):
            if verdict not in ("PASS", "SKIP"):
                problems.append(f"{text}: {name} = {verdict}")
    if problems:
        print("\n".join(problems), file=sys.stderr)
        print("selftest: FAILED", file=sys.stderr)
        return 1
    print(f"selftest: ok ({len(SELFTEST_ROWS)} rows)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primbase",
        description="check base-size and minimal-degree bounds over family grids",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run every grid point of a config file")
    p.add_argument("config", help="grid file path")
    p.add_argument("--format", choices=verifier.FORMATS, default=None)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("family", help="evaluate a single family spec")
    p.add_argument("spec", help='e.g. "Affine(d=3,q=2)"')
    p.add_argument("--format", choices=verifier.FORMATS, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_family)

    p = sub.add_parser("chains", help="check the closed-form inequality chains")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_chains)

    p = sub.add_parser("selftest", help="recompute a few known invariants")
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
