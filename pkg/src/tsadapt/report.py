"""Aggregate run records into summary tables and delimited files.

Aggregation is dataset-wise strict: ranks and p-values use only the
datasets where every method finished every seed with status ``ok``.
Non-ok cells are listed in ``exclusions.csv`` and the affected datasets
drop out of the comparison rather than biasing it. The p-value sample for
a method has one entry per seed: that seed's accuracy averaged across the
complete datasets.

All report numbers are written with 6 significant digits.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError
from .stats import MethodSample, PairwiseMatrix, average_rank, pairwise_pvalues, summarize
from .training import STATUS_OK, RunRecord


def _fmt(v: float) -> str:
    return "%.6g" % float(v)


@dataclass(frozen=True)
class ReportTables:
    """Everything cmd_report writes, in memory."""

    method_ids: tuple[str, ...]
    dataset_ids: tuple[str, ...]
    complete_dataset_ids: tuple[str, ...]
    summary_rows: tuple[tuple[str, str, float, float, int], ...]
    pvalues: PairwiseMatrix | None
    ranks: np.ndarray | None
    timing_rows: tuple[tuple[str, str, float], ...]
    exclusion_rows: tuple[tuple[str, str, int, str], ...]


def build_report(records: list[RunRecord]) -> ReportTables:
    """Reduce raw records to the report tables.

    Needs at least one record. ``pvalues`` is ``None`` when there are no
    complete datasets or fewer than two seeds; for a single method it is the
    trivial 1x1 unit matrix. ``ranks`` is ``None`` without complete datasets.
    """
    if not records:
        raise FormatError("results contain no runs")
    method_ids: list[str] = []
    dataset_ids: list[str] = []
    seeds: list[int] = []
    for rec in records:
        if rec.adapter_id not in method_ids:
            method_ids.append(rec.adapter_id)
        if rec.dataset_id not in dataset_ids:
            dataset_ids.append(rec.dataset_id)
        if rec.seed not in seeds:
            seeds.append(rec.seed)
    seeds.sort()

    ok: dict[tuple[str, str, int], RunRecord] = {}
    exclusions = []
    for rec in records:
        key = (rec.dataset_id, rec.adapter_id, rec.seed)
        if rec.status == STATUS_OK:
            ok[key] = rec
        else:
            exclusions.append((rec.dataset_id, rec.adapter_id, rec.seed, rec.status))

    summary_rows = []
    timing_rows = []
    for d in dataset_ids:
        for m in method_ids:
            cell = [ok[(d, m, s)] for s in seeds if (d, m, s) in ok]
            if not cell:
                continue
            mean, std = summarize([r.accuracy for r in cell])
            summary_rows.append((d, m, mean, std, len(cell)))
            timing_rows.append((d, m, float(np.mean([r.wall_seconds for r in cell]))))

    complete = [
        d
        for d in dataset_ids
        if all((d, m, s) in ok for m in method_ids for s in seeds)
    ]

    ranks = None
    if complete:
        acc = np.array(
            [
                [
                    np.mean([ok[(d, m, s)].accuracy for s in seeds])
                    for m in method_ids
                ]
                for d in complete
            ]
        )
        ranks = average_rank(acc)

    pvalues = None
    if complete and len(method_ids) == 1:
        pvalues = PairwiseMatrix(method_ids=tuple(method_ids), p=np.array([[1.0]]))
    elif complete and len(seeds) >= 2:
        samples = [
            MethodSample(
                method_id=m,
                values=np.array(
                    [np.mean([ok[(d, m, s)].accuracy for d in complete]) for s in seeds]
                ),
            )
            for m in method_ids
        ]
        pvalues = pairwise_pvalues(samples)

    return ReportTables(
        method_ids=tuple(method_ids),
        dataset_ids=tuple(dataset_ids),
        complete_dataset_ids=tuple(complete),
        summary_rows=tuple(summary_rows),
        pvalues=pvalues,
        ranks=ranks,
        timing_rows=tuple(timing_rows),
        exclusion_rows=tuple(exclusions),
    )


def write_report(tables: ReportTables, out_dir, figures: bool = True) -> list[Path]:
    """Write the delimited files (and figures) under ``out_dir``; return the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    path = out / "summary.csv"
    lines = ["dataset,method,mean,std,n_seeds"]
    for d, m, mean, std, n in tables.summary_rows:
        lines.append(f"{d},{m},{_fmt(mean)},{_fmt(std)},{n}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    written.append(path)

    path = out / "pvalues.csv"
    if tables.pvalues is not None:
        ids = tables.pvalues.method_ids
        lines = ["method," + ",".join(ids)]
        for i, m in enumerate(ids):
            lines.append(m + "," + ",".join(_fmt(v) for v in tables.pvalues.p[i]))
    else:
        lines = ["method"]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    written.append(path)

    path = out / "ranks.csv"
    lines = ["method,avg_rank"]
    if tables.ranks is not None:
        for m, r in zip(tables.method_ids, tables.ranks):
            lines.append(f"{m},{_fmt(r)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    written.append(path)

    path = out / "timing.csv"
    lines = ["dataset,method,mean_wall_seconds"]
    for d, m, wall in tables.timing_rows:
        lines.append(f"{d},{m},{_fmt(wall)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    written.append(path)

    path = out / "exclusions.csv"
    lines = ["dataset,adapter,seed,status"]
    for d, m, s, status in tables.exclusion_rows:
        lines.append(f"{d},{m},{s},{status}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    written.append(path)

    if figures:
        from . import figures as fig

        if tables.pvalues is not None:
            written.append(fig.render_pvalue_heatmap(tables.pvalues, out / "pvalues_heatmap.png"))
        if tables.ranks is not None:
            written.append(
                fig.render_rank_bars(tables.method_ids, tables.ranks, out / "average_ranks.png")
            )
        if tables.timing_rows:
            written.append(fig.render_timing_bars(tables.timing_rows, out / "timing.png"))
    return written
