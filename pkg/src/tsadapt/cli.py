"""Command-line interface.

Four subcommands: ``fit`` and ``transform`` work with single reducers and
dataset files, ``benchmark`` runs the full grid from a JSON config, and
``report`` turns a results file into delimited tables plus figures.

Exit codes: 0 success, 2 argument or configuration problems (including
missing files), 3 malformed data or results files, 4 numerical fit or
transform failures. Error messages go to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import adapters as ad
from . import benchmark as bench
from .datasets import infer_format, load_split, save_split
from .errors import ConfigError, DegenerateLabels, FormatError, InvalidArgument, UnderdeterminedFit
from .lcomb import LcombAdapter, apply
from .report import build_report, write_report
from .serialize import load_reducer, save_reducer

OUTPUT_DIR_ENV = "TSADAPT_OUTPUT_DIR"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsadapt",
        description="Fit channel reducers, benchmark them, and report comparisons.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("fit", help="fit a reducer on a training split")
    p.add_argument(
        "--adapter",
        required=True,
        choices=("pca", "svd", "rand_proj", "var_select"),
        help="reducer family to fit",
    )
    p.add_argument("--dim", required=True, type=int, help="output channel count d'")
    p.add_argument("--pws", type=int, default=1, help="patch window size (pca only)")
    p.add_argument("--scaled", action="store_true", help="standardize design columns (pca only)")
    p.add_argument("--seed", type=int, default=0, help="generator seed (rand_proj only)")
    p.add_argument("--input", required=True, help="training split file (.ts or .csv)")
    p.add_argument("--format", choices=("ts", "csv"), help="input format, inferred from the suffix by default")
    p.add_argument("--output", required=True, help="path for the reducer JSON")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("transform", help="apply a saved reducer to a split")
    p.add_argument("--reducer", required=True, help="reducer JSON from 'fit'")
    p.add_argument("--input", required=True, help="split file (.ts or .csv)")
    p.add_argument("--format", choices=("ts", "csv"), help="input format, inferred from the suffix by default")
    p.add_argument("--output", required=True, help="output split path; format follows its suffix")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("benchmark", help="run the adapter grid from a JSON config")
    p.add_argument("--config", required=True, help="benchmark config JSON")
    p.add_argument(
        "--out",
        help="results CSV path (default: <output_dir>/results.csv); appends on resume",
    )
    p.add_argument("--jobs", type=int, default=1, help="parallel workers (default 1)")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("report", help="aggregate a results CSV into tables and figures")
    p.add_argument("--results", required=True, help="results CSV from 'benchmark'")
    p.add_argument("--out-dir", help="directory for the report files (default: current directory)")
    p.add_argument("--no-figures", action="store_true", help="write only the delimited files")
    p.set_defaults(func=cmd_report)
    return parser


def _resolve_format(path: str, fmt: str | None) -> str:
    try:
        return infer_format(path, fmt)
    except InvalidArgument as exc:
        # An unrecognizable suffix is a usage problem, not a compute failure.
        raise ConfigError(str(exc)) from None


def cmd_fit(args) -> int:
    fmt = _resolve_format(args.input, args.format)
    if args.pws != 1 and args.adapter != "pca":
        raise ConfigError(f"--pws only applies to pca, not {args.adapter}")
    if args.scaled and args.adapter != "pca":
        raise ConfigError(f"--scaled only applies to pca, not {args.adapter}")
    split = load_split(args.input, fmt)
    if args.adapter == "pca":
        reducer = ad.fit_pca(split.x, args.dim, scaled=args.scaled, pws=args.pws)
    elif args.adapter == "svd":
        reducer = ad.fit_truncated_svd(split.x, args.dim)
    elif args.adapter == "rand_proj":
        reducer = ad.fit_random_projection(split.x, args.dim, args.seed)
    else:
        reducer = ad.fit_variance_selection(split.x, args.dim)
    save_reducer(reducer, args.output)
    if reducer.explained_variance_ratio is not None:
        evr = reducer.explained_variance_ratio
        parts = " ".join("%.4f" % v for v in evr)
        print(f"explained variance ratio: {parts} (cumulative {evr.sum():.4f})")
    print(f"wrote {args.output}")
    return 0


def cmd_transform(args) -> int:
    in_fmt = _resolve_format(args.input, args.format)
    try:
        out_fmt = infer_format(args.output, None)
    except InvalidArgument:
        out_fmt = in_fmt
    reducer = load_reducer(args.reducer)
    split = load_split(args.input, in_fmt)
    if isinstance(reducer, LcombAdapter):
        reduced = apply(reducer, split.x)
    else:
        reduced = ad.transform(reducer, split.x)
    out_split = type(split)(
        x=reduced,
        labels=split.labels,
        class_names=split.class_names,
        problem_name=split.problem_name,
    )
    save_split(out_split, args.output, out_fmt)
    print(f"wrote {args.output}")
    return 0


def cmd_benchmark(args) -> int:
    cfg = bench.load_config(args.config)
    out_dir = os.environ.get(OUTPUT_DIR_ENV) or cfg.output_dir
    out_path = Path(args.out) if args.out else Path(out_dir) / "results.csv"
    if args.jobs < 1:
        raise ConfigError(f"--jobs must be at least 1, got {args.jobs}")
    records = bench.run_grid(
        cfg,
        out_path,
        jobs=args.jobs,
        log=lambda msg: print(msg, file=sys.stderr),
    )
    n_ok = sum(1 for r in records if r.status == "ok")
    print(f"wrote {out_path} ({len(records)} runs, {n_ok} ok)")
    return 0


def cmd_report(args) -> int:
    _, records = bench.read_results(args.results)
    tables = build_report(records)
    out_dir = args.out_dir or os.environ.get(OUTPUT_DIR_ENV) or "."
    written = write_report(tables, out_dir, figures=not args.no_figures)
    skipped = [
        d for d in tables.dataset_ids if d not in tables.complete_dataset_ids
    ]
    for d in skipped:
        print(
            f"note: dataset {d} has non-ok or missing runs; "
            "excluded from ranks and p-values",
            file=sys.stderr,
        )
    for path in written:
        print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    if getattr(args, "func", None) is None:
        parser.print_help(sys.stderr)
        return 2
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        name = exc.filename if exc.filename else exc
        print(f"error: file not found: {name}", file=sys.stderr)
        return 2
    except IsADirectoryError as exc:
        print(f"error: expected a file, got a directory: {exc.filename}", file=sys.stderr)
        return 2
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InvalidArgument, UnderdeterminedFit, DegenerateLabels) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
