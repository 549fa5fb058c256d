import numpy as np
import pytest

from tsadapt import FormatError, RunRecord, build_report, write_report

# Reference p-value computed once with an independent statistics library and
# frozen here (same samples as the stats module's frozen pair (a, b)).
SAMPLE_A = (0.60, 0.62, 0.61)
SAMPLE_B = (0.58, 0.59, 0.63)
FROZEN_P_AB = 0.5903318162661183


def rec(dataset, method, seed, accuracy, status="ok", wall=0.25, passes=10, dropped=0):
    return RunRecord(
        dataset_id=dataset,
        adapter_id=method,
        seed=seed,
        accuracy=accuracy if status == "ok" else None,
        wall_seconds=wall,
        status=status,
        encoder_forward_passes=passes,
        steps_dropped=dropped,
    )


def full_grid(acc_by_method, datasets=("d1", "d2"), seeds=(0, 1)):
    """One ok record per (dataset, method, seed) with a fixed accuracy per method."""
    return [
        rec(d, m, s, acc)
        for d in datasets
        for m, acc in acc_by_method.items()
        for s in seeds
    ]


class TestBuildReport:
    def test_empty_records_rejected(self):
        with pytest.raises(FormatError, match="no runs"):
            build_report([])

    def test_orders_follow_first_appearance(self):
        records = full_grid({"m2": 0.8, "m1": 0.6}, datasets=("db", "da"))
        tables = build_report(records)
        assert tables.method_ids == ("m2", "m1")
        assert tables.dataset_ids == ("db", "da")

    def test_summary_mean_and_std(self):
        records = [
            rec("d1", "m", 0, 0.5),
            rec("d1", "m", 1, 0.7),
        ]
        tables = build_report(records)
        assert tables.summary_rows == (("d1", "m", 0.6, pytest.approx(np.std([0.5, 0.7], ddof=1)), 2),)

    def test_failed_cells_are_listed_and_excluded(self):
        records = full_grid({"m1": 0.9, "m2": 0.7})
        records[0] = rec("d1", "m1", 0, None, status="budget_exceeded")
        tables = build_report(records)
        assert tables.exclusion_rows == (("d1", "m1", 0, "budget_exceeded"),)
        # d1 is incomplete, d2 still qualifies
        assert tables.complete_dataset_ids == ("d2",)
        # d1/m1 keeps a summary row from its one surviving seed
        row = next(r for r in tables.summary_rows if r[:2] == ("d1", "m1"))
        assert row[4] == 1

    def test_failure_excludes_dataset_not_method(self):
        records = full_grid({"m1": 0.9, "m2": 0.7}, datasets=("d1", "d2", "d3"))
        records[0] = rec("d1", "m1", 0, None, status="memory_exceeded")
        tables = build_report(records)
        assert tables.complete_dataset_ids == ("d2", "d3")
        assert tables.pvalues is not None
        assert tables.ranks is not None

    def test_ranks_average_over_complete_datasets(self):
        # m1 wins on both datasets -> rank 1; m2 -> 2; m3 -> 3
        records = full_grid({"m1": 0.9, "m2": 0.8, "m3": 0.7})
        tables = build_report(records)
        assert np.array_equal(tables.ranks, [1.0, 2.0, 3.0])

    def test_split_decision_gives_fractional_ranks(self):
        records = [
            rec("d1", "m1", 0, 0.9),
            rec("d1", "m2", 0, 0.5),
            rec("d2", "m1", 0, 0.5),
            rec("d2", "m2", 0, 0.9),
        ]
        tables = build_report(records)
        assert np.array_equal(tables.ranks, [1.5, 1.5])

    def test_pvalue_samples_are_per_seed_means(self):
        # method accuracies vary by seed but not by dataset, so the per-seed
        # mean across complete datasets reproduces the frozen samples exactly
        records = []
        for d in ("d1", "d2"):
            for s in range(3):
                records.append(rec(d, "a", s, SAMPLE_A[s]))
                records.append(rec(d, "b", s, SAMPLE_B[s]))
        tables = build_report(records)
        assert tables.pvalues.method_ids == ("a", "b")
        assert tables.pvalues.p[0, 1] == pytest.approx(FROZEN_P_AB, rel=1e-12)
        assert tables.pvalues.p[1, 0] == tables.pvalues.p[0, 1]
        assert tables.pvalues.p[0, 0] == 1.0

    def test_single_method_gets_trivial_matrix(self):
        tables = build_report(full_grid({"only": 0.8}))
        assert tables.pvalues.method_ids == ("only",)
        assert np.array_equal(tables.pvalues.p, [[1.0]])
        assert np.array_equal(tables.ranks, [1.0])

    def test_single_seed_has_no_pvalues_but_keeps_ranks(self):
        records = full_grid({"m1": 0.9, "m2": 0.7}, seeds=(0,))
        tables = build_report(records)
        assert tables.pvalues is None
        assert np.array_equal(tables.ranks, [1.0, 2.0])

    def test_no_complete_datasets_disables_comparisons(self):
        records = full_grid({"m1": 0.9, "m2": 0.7})
        # break every dataset
        records[0] = rec("d1", "m1", 0, None, status="budget_exceeded")
        records[-1] = rec("d2", "m2", 1, None, status="memory_exceeded")
        tables = build_report(records)
        assert tables.complete_dataset_ids == ()
        assert tables.pvalues is None
        assert tables.ranks is None
        assert tables.summary_rows  # per-cell summaries survive

    def test_timing_means_ok_runs_only(self):
        records = [
            rec("d1", "m", 0, 0.5, wall=1.0),
            rec("d1", "m", 1, 0.5, wall=3.0),
        ]
        tables = build_report(records)
        assert tables.timing_rows == (("d1", "m", 2.0),)


class TestWriteReport:
    @pytest.fixture()
    def tables(self):
        return build_report(full_grid({"m1": 0.9, "m2": 0.7}, seeds=(0, 1, 2)))

    def test_writes_five_csvs_without_figures(self, tables, tmp_path):
        written = write_report(tables, tmp_path, figures=False)
        names = sorted(p.name for p in written)
        assert names == [
            "exclusions.csv",
            "pvalues.csv",
            "ranks.csv",
            "summary.csv",
            "timing.csv",
        ]
        assert not list(tmp_path.glob("*.png"))

    def test_figures_are_written_alongside(self, tables, tmp_path):
        written = write_report(tables, tmp_path, figures=True)
        pngs = sorted(p.name for p in written if p.suffix == ".png")
        assert pngs == ["average_ranks.png", "pvalues_heatmap.png", "timing.png"]
        for p in written:
            assert p.stat().st_size > 0

    def test_summary_csv_contents(self, tables, tmp_path):
        write_report(tables, tmp_path, figures=False)
        lines = (tmp_path / "summary.csv").read_text().strip().split("\n")
        assert lines[0] == "dataset,method,mean,std,n_seeds"
        assert lines[1] == "d1,m1,0.9,0,3"
        assert len(lines) == 1 + 4

    def test_pvalues_csv_square(self, tables, tmp_path):
        write_report(tables, tmp_path, figures=False)
        lines = (tmp_path / "pvalues.csv").read_text().strip().split("\n")
        assert lines[0] == "method,m1,m2"
        assert lines[1].startswith("m1,1,")
        assert len(lines) == 3

    def test_header_only_files_when_nothing_qualifies(self, tmp_path):
        records = [rec("d1", "m1", 0, None, status="budget_exceeded")]
        tables = build_report(records)
        written = write_report(tables, tmp_path, figures=True)
        assert (tmp_path / "pvalues.csv").read_text() == "method\n"
        assert (tmp_path / "ranks.csv").read_text() == "method,avg_rank\n"
        # no comparison figures without comparisons; timing needs ok runs too
        assert not list(tmp_path.glob("*.png"))
        assert len(written) == 5

    def test_ranks_csv_six_sig_figs(self, tmp_path):
        records = [
            rec("d1", "m1", 0, 2 / 3),
            rec("d1", "m2", 0, 1 / 3),
            rec("d1", "m3", 0, 1 / 3),
        ]
        tables = build_report(records)
        write_report(tables, tmp_path, figures=False)
        lines = (tmp_path / "ranks.csv").read_text().strip().split("\n")
        assert lines[1:] == ["m1,1", "m2,2.5", "m3,2.5"]

    def test_exclusions_csv_contents(self, tmp_path):
        records = full_grid({"m1": 0.9})
        records[0] = rec("d1", "m1", 0, None, status="memory_exceeded")
        write_report(build_report(records), tmp_path, figures=False)
        lines = (tmp_path / "exclusions.csv").read_text().strip().split("\n")
        assert lines == ["dataset,adapter,seed,status", "d1,m1,0,memory_exceeded"]
