import json

import numpy as np
import pytest

from tsadapt import (
    fit_pca,
    load_reducer,
    load_split,
    new_lcomb,
    save_reducer,
    save_split,
    synth_lowrank,
    transform,
)
from tsadapt.cli import OUTPUT_DIR_ENV, main
from tsadapt.lcomb import apply as lcomb_apply


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)


@pytest.fixture()
def split_file(tmp_path):
    ds = synth_lowrank(8, 16, 4, 2, 2, 0.05, 0)
    path = tmp_path / "train.ts"
    save_split(ds.train, path)
    return path, ds.train


def bench_config(tmp_path, **overrides):
    ds = synth_lowrank(8, 16, 3, 2, 2, 0.05, 1)
    save_split(ds.train, tmp_path / "g_train.ts")
    save_split(ds.test, tmp_path / "g_test.ts")
    obj = {
        "datasets": [
            {
                "id": "g",
                "train_path": str(tmp_path / "g_train.ts"),
                "test_path": str(tmp_path / "g_test.ts"),
            }
        ],
        "adapters": [
            {"id": "pca2", "kind": "pca", "d_prime": 2},
            {"id": "rp2", "kind": "rand_proj", "d_prime": 2},
        ],
        "seeds": [0, 1],
        "encoder": {"patch_len": 4, "stride": 2, "embed_dim": 8},
        "train": {"epochs": 3},
        "output_dir": str(tmp_path),
    }
    obj.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(obj), encoding="utf-8")
    return path, obj


class TestParserPlumbing:
    def test_no_command_prints_help_and_fails(self, capsys):
        assert main([]) == 2
        assert "usage" in capsys.readouterr().err

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert "benchmark" in capsys.readouterr().out

    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_missing_required_flag(self, capsys):
        assert main(["fit", "--adapter", "pca"]) == 2


class TestFit:
    def test_fit_pca_writes_loadable_reducer(self, split_file, tmp_path, capsys):
        path, train = split_file
        out = tmp_path / "reducer.json"
        code = main(
            ["fit", "--adapter", "pca", "--dim", "2", "--input", str(path), "--output", str(out)]
        )
        assert code == 0
        captured = capsys.readouterr()
        assert "explained variance ratio:" in captured.out
        assert f"wrote {out}" in captured.out
        reducer = load_reducer(out)
        expected = fit_pca(train.x, 2)
        assert np.array_equal(reducer.w, expected.w)
        assert np.array_equal(reducer.center, expected.center)

    def test_fit_pca_on_natops_shaped_data(self, tmp_path, capsys):
        ds = synth_lowrank(12, 51, 24, 3, 6, 0.05, 4)
        path = tmp_path / "natops_like.ts"
        save_split(ds.train, path)
        out = tmp_path / "r.json"
        assert main(
            ["fit", "--adapter", "pca", "--dim", "5", "--input", str(path), "--output", str(out)]
        ) == 0
        assert load_reducer(out).w.shape == (5, 24)

    def test_fit_var_select_prints_no_evr(self, split_file, tmp_path, capsys):
        path, _ = split_file
        out = tmp_path / "reducer.json"
        assert main(
            ["fit", "--adapter", "var_select", "--dim", "1", "--input", str(path), "--output", str(out)]
        ) == 0
        assert "explained variance" not in capsys.readouterr().out

    def test_dim_too_large_is_compute_error(self, split_file, tmp_path, capsys):
        path, _ = split_file
        code = main(
            ["fit", "--adapter", "pca", "--dim", "99", "--input", str(path), "--output", str(tmp_path / "r.json")]
        )
        assert code == 4
        err = capsys.readouterr().err
        assert err.startswith("error:")
        assert "d_prime=99" in err

    def test_missing_input_is_config_error(self, tmp_path, capsys):
        code = main(
            ["fit", "--adapter", "pca", "--dim", "1", "--input", str(tmp_path / "no.ts"), "--output", str(tmp_path / "r.json")]
        )
        assert code == 2
        assert "file not found" in capsys.readouterr().err

    def test_unknown_suffix_needs_format_flag(self, split_file, tmp_path, capsys):
        path, _ = split_file
        renamed = tmp_path / "train.dat"
        renamed.write_bytes(path.read_bytes())
        args = ["fit", "--adapter", "pca", "--dim", "1", "--input", str(renamed), "--output", str(tmp_path / "r.json")]
        assert main(args) == 2
        assert main(args + ["--format", "ts"]) == 0

    def test_malformed_ts_is_format_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.ts"
        bad.write_text("@problemName x\n@classLabel true a\n@data\n1.0,oops:a\n", encoding="utf-8")
        code = main(
            ["fit", "--adapter", "pca", "--dim", "1", "--input", str(bad), "--output", str(tmp_path / "r.json")]
        )
        assert code == 3
        assert "error:" in capsys.readouterr().err

    def test_scaled_rejected_outside_pca(self, split_file, tmp_path, capsys):
        path, _ = split_file
        code = main(
            ["fit", "--adapter", "svd", "--scaled", "--dim", "1", "--input", str(path), "--output", str(tmp_path / "r.json")]
        )
        assert code == 2
        assert "--scaled" in capsys.readouterr().err

    def test_pws_rejected_outside_pca(self, split_file, tmp_path, capsys):
        path, _ = split_file
        code = main(
            ["fit", "--adapter", "rand_proj", "--pws", "2", "--dim", "1", "--input", str(path), "--output", str(tmp_path / "r.json")]
        )
        assert code == 2


class TestTransform:
    def test_matches_in_memory_transform(self, split_file, tmp_path):
        path, train = split_file
        reducer_path = tmp_path / "r.json"
        reducer = fit_pca(train.x, 2)
        save_reducer(reducer, reducer_path)
        out = tmp_path / "reduced.ts"
        code = main(
            ["transform", "--reducer", str(reducer_path), "--input", str(path), "--output", str(out)]
        )
        assert code == 0
        reduced = load_split(out)
        assert np.array_equal(reduced.x.values, transform(reducer, train.x).values)
        assert np.array_equal(reduced.labels, train.labels)

    def test_output_suffix_selects_format(self, split_file, tmp_path):
        path, train = split_file
        reducer_path = tmp_path / "r.json"
        save_reducer(fit_pca(train.x, 2), reducer_path)
        out = tmp_path / "reduced.csv"
        assert main(
            ["transform", "--reducer", str(reducer_path), "--input", str(path), "--output", str(out)]
        ) == 0
        assert (tmp_path / "reduced_labels.csv").exists()
        assert load_split(out).x.values.shape == (8, 16, 2)

    def test_lcomb_reducer_applies(self, split_file, tmp_path):
        path, train = split_file
        adapter = new_lcomb(4, 2, k=2)
        reducer_path = tmp_path / "l.json"
        save_reducer(adapter, reducer_path)
        out = tmp_path / "mixed.ts"
        assert main(
            ["transform", "--reducer", str(reducer_path), "--input", str(path), "--output", str(out)]
        ) == 0
        assert np.array_equal(load_split(out).x.values, lcomb_apply(adapter, train.x).values)

    def test_identity_selection_passes_data_through(self, split_file, tmp_path):
        from tsadapt import ChannelReducer

        path, train = split_file
        d = train.x.n_channels
        identity = ChannelReducer(
            kind="var_select",
            w=np.eye(d),
            center=np.zeros(d),
            scale=np.ones(d),
            pws=1,
            d_in=d,
            d_out=d,
            truncated_steps=train.x.n_steps,
        )
        reducer_path = tmp_path / "eye.json"
        save_reducer(identity, reducer_path)
        out = tmp_path / "same.ts"
        assert main(
            ["transform", "--reducer", str(reducer_path), "--input", str(path), "--output", str(out)]
        ) == 0
        assert np.array_equal(load_split(out).x.values, train.x.values)

    def test_corrupt_reducer_is_format_error(self, split_file, tmp_path, capsys):
        path, _ = split_file
        bad = tmp_path / "bad.json"
        bad.write_text("{\"kind\": \"pca\"", encoding="utf-8")
        code = main(["transform", "--reducer", str(bad), "--input", str(path), "--output", str(tmp_path / "o.ts")])
        assert code == 3

    def test_missing_reducer_file(self, split_file, tmp_path):
        path, _ = split_file
        assert main(
            ["transform", "--reducer", str(tmp_path / "no.json"), "--input", str(path), "--output", str(tmp_path / "o.ts")]
        ) == 2

    def test_channel_mismatch_is_compute_error(self, split_file, tmp_path, capsys):
        path, train = split_file
        other = synth_lowrank(4, 16, 7, 2, 2, 0.05, 3)
        reducer_path = tmp_path / "seven.json"
        save_reducer(fit_pca(other.train.x, 2), reducer_path)
        code = main(
            ["transform", "--reducer", str(reducer_path), "--input", str(path), "--output", str(tmp_path / "o.ts")]
        )
        assert code == 4


class TestBenchmarkCommand:
    def test_grid_runs_and_reports_counts(self, tmp_path, capsys):
        cfg_path, _ = bench_config(tmp_path)
        out = tmp_path / "results.csv"
        assert main(["benchmark", "--config", str(cfg_path), "--out", str(out)]) == 0
        captured = capsys.readouterr()
        assert f"wrote {out} (4 runs, 4 ok)" in captured.out
        # one progress line per cell on stderr
        assert captured.err.count("status=ok") == 4
        text = out.read_text()
        assert text.startswith("# config_hash=")
        assert len(text.strip().split("\n")) == 2 + 4

    def test_output_dir_from_config(self, tmp_path, capsys):
        cfg_path, _ = bench_config(tmp_path)
        assert main(["benchmark", "--config", str(cfg_path)]) == 0
        assert (tmp_path / "results.csv").exists()

    def test_env_var_overrides_config_dir(self, tmp_path, monkeypatch, capsys):
        env_dir = tmp_path / "envout"
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(env_dir))
        cfg_path, _ = bench_config(tmp_path)
        assert main(["benchmark", "--config", str(cfg_path)]) == 0
        assert (env_dir / "results.csv").exists()
        assert not (tmp_path / "results.csv").exists()

    def test_out_flag_beats_env_var(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "envout"))
        cfg_path, _ = bench_config(tmp_path)
        out = tmp_path / "flag.csv"
        assert main(["benchmark", "--config", str(cfg_path), "--out", str(out)]) == 0
        assert out.exists()
        assert not (tmp_path / "envout").exists()

    def test_missing_config(self, tmp_path, capsys):
        assert main(["benchmark", "--config", str(tmp_path / "no.json")]) == 2

    def test_invalid_config_names_field(self, tmp_path, capsys):
        cfg_path, obj = bench_config(tmp_path)
        obj["adapters"][0]["kind"] = "umap"
        cfg_path.write_text(json.dumps(obj), encoding="utf-8")
        assert main(["benchmark", "--config", str(cfg_path)]) == 2
        assert "config.adapters[0].kind" in capsys.readouterr().err

    def test_jobs_must_be_positive(self, tmp_path, capsys):
        cfg_path, _ = bench_config(tmp_path)
        assert main(["benchmark", "--config", str(cfg_path), "--jobs", "0"]) == 2

    def test_budget_rows_survive_reporting(self, tmp_path, capsys):
        cfg_path, obj = bench_config(tmp_path)
        obj["train"]["budget_seconds"] = 1e-9
        cfg_path.write_text(json.dumps(obj), encoding="utf-8")
        out = tmp_path / "results.csv"
        assert main(["benchmark", "--config", str(cfg_path), "--out", str(out)]) == 0
        assert "(4 runs, 0 ok)" in capsys.readouterr().out
        rows = out.read_text().strip().split("\n")[2:]
        assert all(",budget_exceeded," in r for r in rows)
        assert all(r.split(",")[3] == "" for r in rows)


class TestReportCommand:
    @pytest.fixture()
    def results_file(self, tmp_path):
        cfg_path, _ = bench_config(tmp_path)
        out = tmp_path / "results.csv"
        assert main(["benchmark", "--config", str(cfg_path), "--out", str(out)]) == 0
        return out

    def test_full_pipeline_writes_tables_and_figures(self, results_file, tmp_path, capsys):
        report_dir = tmp_path / "report"
        assert main(["report", "--results", str(results_file), "--out-dir", str(report_dir)]) == 0
        out = capsys.readouterr().out
        for name in ("summary.csv", "pvalues.csv", "ranks.csv", "timing.csv", "exclusions.csv"):
            assert (report_dir / name).exists()
            assert name in out
        pngs = sorted(p.name for p in report_dir.glob("*.png"))
        assert pngs == ["average_ranks.png", "pvalues_heatmap.png", "timing.png"]
        assert all((report_dir / p).stat().st_size > 0 for p in pngs)

    def test_no_figures_flag(self, results_file, tmp_path, capsys):
        report_dir = tmp_path / "nofig"
        assert main(
            ["report", "--results", str(results_file), "--out-dir", str(report_dir), "--no-figures"]
        ) == 0
        assert not list(report_dir.glob("*.png"))
        assert (report_dir / "summary.csv").exists()

    def test_env_var_supplies_out_dir(self, results_file, tmp_path, monkeypatch, capsys):
        env_dir = tmp_path / "envreport"
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(env_dir))
        assert main(["report", "--results", str(results_file), "--no-figures"]) == 0
        assert (env_dir / "summary.csv").exists()

    def test_incomplete_dataset_noted_on_stderr(self, tmp_path, capsys):
        cfg_path, obj = bench_config(tmp_path)
        obj["train"]["budget_seconds"] = 1e-9
        cfg_path.write_text(json.dumps(obj), encoding="utf-8")
        out = tmp_path / "results.csv"
        main(["benchmark", "--config", str(cfg_path), "--out", str(out)])
        capsys.readouterr()
        report_dir = tmp_path / "report"
        assert main(["report", "--results", str(out), "--out-dir", str(report_dir), "--no-figures"]) == 0
        assert "excluded from ranks" in capsys.readouterr().err
        lines = (report_dir / "exclusions.csv").read_text().strip().split("\n")
        assert len(lines) == 1 + 4

    def test_missing_results_file(self, tmp_path, capsys):
        assert main(["report", "--results", str(tmp_path / "no.csv")]) == 2

    def test_results_without_rows_is_format_error(self, tmp_path, capsys):
        empty = tmp_path / "empty.csv"
        empty.write_text(
            "dataset,adapter,seed,accuracy,wall_seconds,status,encoder_forward_passes,steps_dropped\n",
            encoding="utf-8",
        )
        assert main(["report", "--results", str(empty), "--out-dir", str(tmp_path)]) == 3
        assert "no runs" in capsys.readouterr().err

    def test_corrupt_results_is_format_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("dataset,adapter\n", encoding="utf-8")
        assert main(["report", "--results", str(bad), "--out-dir", str(tmp_path)]) == 3
