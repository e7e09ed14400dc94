"""Command-line interface for MLPA design (``mlpa`` command).

Usage examples::

    mlpa design --elements 23 --levels 3 --objective unique
    mlpa design --elements 14 --levels 4 --objective joint --all-ties --format json
    mlpa sweep --levels 3 --min 8 --max 30 --out sweep_L3.csv
    mlpa analyze --positions 0,2,3,4,5,6,9,12 --format json
    mlpa compare --levels-list 3,4 --min 8 --max 40 --families mlpa,nested,coprime --out v.csv
    mlpa alternatives --levels 4 --min 14 --max 31
    mlpa validate --partition 2,3,5 --spacing 5,2,3
"""

from __future__ import annotations

import argparse
import sys
from collections import defaultdict
from pathlib import Path

from mlpa_design._version import __version__
from mlpa_design.cache import ResultCache
from mlpa_design.coarray import difference_coarray
from mlpa_design.config import Settings, load_settings
from mlpa_design.core import (
    CATEGORY_COINCIDENT,
    CATEGORY_COPRIME,
    CATEGORY_PARTITION,
    CATEGORY_SPACING,
    Violation,
    validate_config,
)
from mlpa_design.errors import InfeasibleQueryError, InvalidQueryError, MlpaError
from mlpa_design.records import (
    ALTERNATIVES_HEADER,
    COMPARE_HEADER,
    FORMATS,
    alternative_rows,
    compare_row,
    records_from_result,
    render_csv,
    render_json,
    render_report,
    render_rows,
    render_sweep_csv,
    render_table,
)
from mlpa_design.reference import FAMILIES, default_reference, reference_positions
from mlpa_design.search import (
    OBJECTIVE_CONSECUTIVE,
    OBJECTIVE_JOINT,
    OBJECTIVE_UNIQUE,
    OBJECTIVES,
    DesignQuery,
    DesignSpace,
    design_alternatives,
    optimize,
    score_design_space,
    sweep,
)

# ── Exit codes ───────────────────────────────────────────────────────────────

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_INVALID = 3
EXIT_USAGE = 64
EXIT_IO = 66

FAMILY_MLPA = "mlpa"
COMPARE_FAMILIES = (FAMILY_MLPA, *FAMILIES)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit 64; exit 2 means "infeasible"."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _int_list(text: str) -> list[int]:
    """argparse type for ``"0,2,3"``-style integer lists."""
    items = [item.strip() for item in text.split(",")]
    try:
        values = [int(item) for item in items]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        ) from None
    return values


def _fail(message: str) -> None:
    print(f"✗ {message}", file=sys.stderr)


# ── Search plumbing ──────────────────────────────────────────────────────────


class _Searcher:
    """Supplies design spaces through the cache (unless disabled)."""

    def __init__(self, settings: Settings, *, verbose: bool = False) -> None:
        self.settings = settings
        self.verbose = verbose
        self.cache = ResultCache(settings.cache_dir) if settings.use_cache else None

    def space(self, total: int, levels: int) -> DesignSpace:
        if self.cache is not None:
            space = self.cache.fetch(total, levels, workers=self.settings.workers)
        else:
            space = score_design_space(total, levels, workers=self.settings.workers)
        if self.verbose:
            print(
                f"N={total} L={levels}: {space.partitions} partition(s), "
                f"{space.examined} derangement(s) examined, "
                f"{space.rejected} rejected for coincident elements",
                file=sys.stderr,
            )
        return space

    def report_cache(self) -> None:
        if self.verbose and self.cache is not None:
            print(
                f"cache {self.cache.root}: {self.cache.hits} hit(s), {self.cache.misses} miss(es)",
                file=sys.stderr,
            )


def _searcher(args: argparse.Namespace) -> _Searcher:
    settings = load_settings(
        config_path=args.config,
        cache_dir=args.cache_dir,
        workers=args.workers,
        no_cache=args.no_cache,
    )
    return _Searcher(settings, verbose=args.verbose)


def _write_output(text: str, out: Path | None) -> int:
    if out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        out.write_text(text, encoding="utf-8")
    except OSError as exc:
        _fail(f"Cannot write {out}: {exc}")
        return EXIT_IO
    print(f"Wrote {out}")
    return EXIT_OK


def _check_range(lo: int, levels: int) -> None:
    if lo < 1:
        raise InvalidQueryError(f"--min must be >= 1, got {lo}")
    if levels < 2:
        raise InvalidQueryError(f"--levels must be >= 2, got {levels}")


# ── Subcommand handlers ─────────────────────────────────────────────────────


def _handle_design(args: argparse.Namespace) -> int:
    """Solve a single (N, L) query."""
    query = DesignQuery(args.elements, args.levels, args.objective)
    searcher = _searcher(args)
    try:
        result = optimize(query, space=searcher.space(query.total_elements, query.levels))
    except InfeasibleQueryError as exc:
        _fail(str(exc))
        return EXIT_INFEASIBLE
    searcher.report_cache()

    if result.fallbacks:
        print(
            f"No configuration maximizes both lag counts for N={query.total_elements}, "
            f"L={query.levels}; showing the separate optima.",
            file=sys.stderr,
        )
    records = records_from_result(result, all_ties=args.all_ties)
    if args.format == "json":
        echo = {
            "N": query.total_elements,
            "L": query.levels,
            "objective": query.objective,
            "all_ties": args.all_ties,
        }
        text = render_json(echo, records, wavelength=args.wavelength)
    elif args.format == "csv":
        text = render_csv(records, wavelength=args.wavelength)
    else:
        text = render_table(records)
    sys.stdout.write(text)
    return EXIT_OK


def _handle_sweep(args: argparse.Namespace) -> int:
    """Write the optimal spacing traces for a range of N."""
    _check_range(args.min, args.levels)
    searcher = _searcher(args)
    rows = sweep(args.levels, range(args.min, args.max + 1), space_for=searcher.space)
    searcher.report_cache()
    return _write_output(render_sweep_csv(args.levels, rows), args.out)


def _handle_analyze(args: argparse.Namespace) -> int:
    """Report the coarray metrics of an arbitrary geometry."""
    report = difference_coarray(args.positions)
    positions = sorted(set(args.positions))
    sys.stdout.write(render_report(positions, report, args.format))
    return EXIT_OK


def _handle_compare(args: argparse.Namespace) -> int:
    """Unit-spacing traces of MLPA optima against nested and coprime arrays."""
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    unknown = [f for f in families if f not in COMPARE_FAMILIES]
    if unknown:
        _fail(
            f"Unknown family: {', '.join(unknown)} "
            f"(choose from {', '.join(COMPARE_FAMILIES)})"
        )
        return EXIT_USAGE
    for levels in args.levels_list:
        _check_range(args.min, levels)

    searcher = _searcher(args)
    totals = range(args.min, args.max + 1)
    rows: list[list[str]] = []
    for family in families:
        if family == FAMILY_MLPA:
            for levels in args.levels_list:
                for n in totals:
                    space = searcher.space(n, levels)
                    if not space.feasible:
                        continue
                    for objective in (OBJECTIVE_UNIQUE, OBJECTIVE_CONSECUTIVE):
                        result = optimize(DesignQuery(n, levels, objective), space=space)
                        config, report = result.optima[0]
                        params = ";".join(str(s) for s in config.spacing.spacings)
                        rows.append(
                            compare_row(family, str(levels), n, objective, params, report)
                        )
            continue
        for n in totals:
            ref = default_reference(family, n)
            if ref is None:
                continue
            report = difference_coarray(reference_positions(ref))
            params = ";".join(str(p) for p in ref.params)
            rows.append(compare_row(family, "-", n, "-", params, report))
    searcher.report_cache()
    return _write_output(render_rows(COMPARE_HEADER, rows, "csv"), args.out)


def _handle_alternatives(args: argparse.Namespace) -> int:
    """List every configuration that maximizes either lag count, per N."""
    _check_range(args.min, args.levels)
    searcher = _searcher(args)
    rows: list[list[str]] = []
    for n in range(args.min, args.max + 1):
        space = searcher.space(n, args.levels)
        if space.feasible:
            rows.extend(alternative_rows(n, design_alternatives(n, args.levels, space=space)))
    searcher.report_cache()
    return _write_output(render_rows(ALTERNATIVES_HEADER, rows, args.format), args.out)


_CATEGORY_ORDER = (CATEGORY_PARTITION, CATEGORY_COPRIME, CATEGORY_SPACING, CATEGORY_COINCIDENT)


def _print_violations(violations: list[Violation]) -> None:
    """Print violations grouped by category."""
    grouped: dict[str, list[Violation]] = defaultdict(list)
    for v in violations:
        grouped[v.category].append(v)

    print(f"\n✗ Invalid configuration: {len(violations)} violation(s)\n", file=sys.stderr)
    for cat in _CATEGORY_ORDER:
        for v in grouped.get(cat, []):
            print(f"    ✗ [{cat.capitalize()}] {v.message}", file=sys.stderr)
    print(file=sys.stderr)


def _handle_validate(args: argparse.Namespace) -> int:
    """Check a partition (and optional spacing) against every MLPA invariant."""
    violations = validate_config(args.partition, args.spacing)
    if violations:
        _print_violations(violations)
        return EXIT_INVALID
    print("✓ valid configuration")
    return EXIT_OK


# ── Argument parser ─────────────────────────────────────────────────────────


def _search_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", type=Path, default=None, help="Result cache directory")
    common.add_argument(
        "--no-cache",
        action="store_true",
        default=False,
        help="Recompute instead of reading or writing the result cache",
    )
    common.add_argument("--workers", type=int, default=None, help="Worker processes (default 1)")
    common.add_argument("--config", type=Path, default=None, help="Settings file (mlpa.yaml)")
    common.add_argument(
        "--verbose",
        action="store_true",
        default=False,
        help="Print search statistics to stderr",
    )
    return common


def _range_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--min", type=int, required=True, help="Smallest N")
    sub.add_argument("--max", type=int, required=True, help="Largest N (inclusive)")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="mlpa",
        description=f"Multi-level prime array design (v{__version__})",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _search_options()

    # ── mlpa design ──────────────────────────────────────────────────────
    design = subparsers.add_parser(
        "design", parents=[common], help="Find the optimal MLPA for one (N, L)"
    )
    design.add_argument("--elements", type=int, required=True, help="Total element count N")
    design.add_argument("--levels", type=int, required=True, help="Number of subarrays L")
    design.add_argument(
        "--objective",
        choices=list(OBJECTIVES),
        default=OBJECTIVE_UNIQUE,
        help=f'Lag count to maximize (default: "{OBJECTIVE_UNIQUE}"; '
        f'"{OBJECTIVE_JOINT}" requires both)',
    )
    design.add_argument(
        "--all-ties",
        action="store_true",
        default=False,
        help="Emit every tied optimum instead of the recommended one",
    )
    design.add_argument("--format", choices=list(FORMATS), default="table")
    design.add_argument(
        "--wavelength",
        type=float,
        default=None,
        help="Also emit physical positions for d = wavelength / 2",
    )
    design.set_defaults(func=_handle_design)

    # ── mlpa sweep ───────────────────────────────────────────────────────
    sweep_parser = subparsers.add_parser(
        "sweep", parents=[common], help="Optimal spacing traces over a range of N (CSV)"
    )
    sweep_parser.add_argument("--levels", type=int, required=True, help="Number of subarrays L")
    _range_options(sweep_parser)
    sweep_parser.add_argument("--out", type=Path, required=True, help="Output CSV path")
    sweep_parser.add_argument("--format", choices=["csv"], default="csv")
    sweep_parser.set_defaults(func=_handle_sweep)

    # ── mlpa analyze ─────────────────────────────────────────────────────
    analyze = subparsers.add_parser("analyze", help="Coarray metrics of arbitrary positions")
    analyze.add_argument(
        "--positions",
        type=_int_list,
        required=True,
        help='Comma-separated nonnegative integers, e.g. "0,2,3,4"',
    )
    analyze.add_argument("--format", choices=["table", "json"], default="table")
    analyze.set_defaults(func=_handle_analyze)

    # ── mlpa compare ─────────────────────────────────────────────────────
    compare = subparsers.add_parser(
        "compare", parents=[common], help="Unit-spacing traces against reference arrays (CSV)"
    )
    compare.add_argument(
        "--levels-list", type=_int_list, default=[3, 4], help='MLPA levels, e.g. "3,4"'
    )
    _range_options(compare)
    compare.add_argument(
        "--families",
        default=",".join(COMPARE_FAMILIES),
        help=f'Comma-separated families (default: "{",".join(COMPARE_FAMILIES)}")',
    )
    compare.add_argument("--out", type=Path, required=True, help="Output CSV path")
    compare.set_defaults(func=_handle_compare)

    # ── mlpa alternatives ────────────────────────────────────────────────
    alternatives = subparsers.add_parser(
        "alternatives", parents=[common], help="All lag-maximizing designs per N"
    )
    alternatives.add_argument("--levels", type=int, required=True, help="Number of subarrays L")
    _range_options(alternatives)
    alternatives.add_argument("--format", choices=["table", "csv"], default="table")
    alternatives.add_argument("--out", type=Path, default=None, help="Output path (default stdout)")
    alternatives.set_defaults(func=_handle_alternatives)

    # ── mlpa validate ────────────────────────────────────────────────────
    validate = subparsers.add_parser("validate", help="Check a configuration's invariants")
    validate.add_argument("--partition", type=_int_list, required=True, help='e.g. "2,3,5"')
    validate.add_argument("--spacing", type=_int_list, default=None, help='e.g. "5,2,3"')
    validate.set_defaults(func=_handle_validate)

    return parser


# ── Entrypoint ───────────────────────────────────────────────────────────────


def run(argv: list[str] | None = None) -> int:
    """Parse *argv*, dispatch, and return the exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MlpaError as exc:
        _fail(str(exc))
        return EXIT_USAGE


def main(argv: list[str] | None = None) -> None:
    """CLI entrypoint (installed as ``mlpa``)."""
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
