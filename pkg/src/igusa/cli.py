"""Command line runner: ``verify <suite> [options]``."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

from .groebner import Budget
from .report import FAIL, RunOptions, SuiteReport, dumps, write_report
from .suites import FAST_SUITES, SUITE_NAMES, run_suite


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verify", description="Run exact verification suites.")
    p.add_argument("suite", choices=SUITE_NAMES)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--json", metavar="PATH", help="write the JSON report here")
    p.add_argument("--budget-spairs", type=_positive, default=50_000)
    p.add_argument("--budget-secs", type=float, default=None,
                   help="time cap for each Groebner basis computation")
    p.add_argument("--samples", type=_positive, default=None,
                   help="override the number of random draws per sampled check")
    p.add_argument("--include-slow", action="store_true")
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--quiet", action="store_true", help="only print the verdict")
    return p


def _run_one(args) -> SuiteReport:
    suite, opts = args
    return run_suite(suite, opts)


def run(suite: str, opts: RunOptions, jobs: int = 1) -> SuiteReport:
    """Run a suite; 'all' fans out over its member suites, up to ``jobs`` at a time."""
    if suite != "all" or jobs == 1:
        return run_suite(suite, opts)
    members = list(FAST_SUITES) + (["slow"] if opts.include_slow else [])
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_run_one, [(m, opts) for m in members]))
    return SuiteReport("all", opts.seed, tuple(c for r in parts for c in r.checks))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    opts = RunOptions(
        seed=args.seed,
        budget=Budget(max_spairs=args.budget_spairs, max_seconds=args.budget_secs),
        samples=args.samples,
        include_slow=args.include_slow,
    )
    report = run(args.suite, opts, args.jobs)
    if not args.quiet:
        for c in report.checks:
            print(f"{c.status.upper():15s} {c.id:32s} {c.ms:>8d} ms")
    print(f"verdict: {report.verdict}")
    if args.json:
        if args.json == "-":
            sys.stdout.write(dumps(report))
        else:
            write_report(report, args.json)
    return 1 if report.verdict == FAIL else 0


if __name__ == "__main__":
    sys.exit(main())
