"""Command-line entry point: ``pkgnet analyze | compare | baseline``.

Exit codes: 0 success, 2 input or usage error, 3 empty parse,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import PkgNetError
from .report import (
    AnalyzeOptions,
    dumps,
    render_baseline,
    run_analyze,
    run_compare,
    run_random_baseline,
)

def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return n


def build_parser() -> argparse.ArgumentParser:
    # argparse usage errors already exit with status 2
    p = argparse.ArgumentParser(prog="pkgnet", description="Network statistics for package dependency graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyse one repository snapshot")
    a.add_argument("input", help="Packages control file or ports INDEX")
    a.add_argument("--format", dest="fmt", choices=["debian", "bsd-index"], default="debian")
    a.add_argument("--dep-kind", choices=["build", "run"], default=None,
                   help="dependency field to use (default: run for debian, build for bsd-index)")
    a.add_argument("--alt-policy", choices=["first", "all", "none"], default="first")
    a.add_argument("--pre-depends", action="store_true", help="also read Pre-Depends (debian)")
    a.add_argument("--unknown", dest="unknown_policy", choices=["drop", "stub"], default="drop")
    a.add_argument("--k-min", type=_positive, default=1)
    a.add_argument("--fit-method", choices=["frequency", "ccdf"], default="frequency")
    a.add_argument("--top", type=_positive, default=20)
    a.add_argument("--l-mode", choices=["auto", "exact", "sampled"], default="auto")
    a.add_argument("--samples", type=_positive, default=1000, help="BFS sources for sampled L")
    a.add_argument("--diameter-mode", choices=["auto", "exact", "sampled"], default="auto")
    a.add_argument("--sweeps", type=_positive, default=10, help="double sweeps for sampled diameter")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--degree-convention", choices=["undirected", "directed"], default="undirected")
    a.add_argument("--r-min", type=float, default=10.0)
    a.add_argument("--f-max", type=float, default=2.0)
    a.add_argument("--label", default=None)
    a.add_argument("--timestamp", default=None, help="snapshot timestamp (default: input mtime, UTC)")
    a.add_argument("--paper-values", action="store_true", help="add the published 2004 figures to the report")
    a.add_argument("--out", required=True, help="output directory")

    c = sub.add_parser("compare", help="side-by-side table of two reports")
    c.add_argument("report_a")
    c.add_argument("report_b")
    c.add_argument("--paper-values", action="store_true")

    b = sub.add_parser("baseline", help="measure C and L on Erdős–Rényi G(n, m) graphs")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--seeds", type=_positive, default=10)
    b.add_argument("--seed", type=int, default=0, help="first seed")
    b.add_argument("--l-mode", choices=["auto", "exact", "sampled"], default="auto")
    b.add_argument("--samples", type=_positive, default=1000)
    b.add_argument("--out", default=None, help="write the JSON result here")
    return p


def _analyze(args: argparse.Namespace) -> int:
    opts = AnalyzeOptions(
        fmt=args.fmt,
        dep_kind=args.dep_kind,
        alt_policy=args.alt_policy,
        include_pre_depends=args.pre_depends,
        unknown_policy=args.unknown_policy,
        k_min=args.k_min,
        fit_method=args.fit_method,
        top=args.top,
        l_mode=args.l_mode,
        samples=args.samples,
        diameter_mode=args.diameter_mode,
        sweeps=args.sweeps,
        seed=args.seed,
        degree_convention=args.degree_convention,
        r_min=args.r_min,
        f_max=args.f_max,
        label=args.label,
        timestamp=args.timestamp,
        paper_values=args.paper_values,
    )
    report = run_analyze(args.input, args.out, opts)
    length = report["path_length"]["value"]
    print(
        f"{report['snapshot']['label']}: n={report['n']} m={report['m']} "
        f"giant={report['components']['giant_size']} C={report['clustering']['value']:.4g} "
        f"L={'-' if length is None else format(length, '.4g')} "
        f"small-world={report['small_world']['is_small_world']} -> {Path(args.out) / 'report.json'}"
    )
    return 0


def _baseline(args: argparse.Namespace) -> int:
    result = run_random_baseline(args.n, args.m, args.seeds, args.seed, args.l_mode, args.samples)
    sys.stdout.write(render_baseline(result))
    if args.out:
        Path(args.out).write_text(dumps(result), encoding="utf-8")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return _analyze(args)
        if args.command == "compare":
            sys.stdout.write(run_compare(args.report_a, args.report_b, args.paper_values))
            return 0
        return _baseline(args)
    except PkgNetError as exc:
        print(f"pkgnet: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
