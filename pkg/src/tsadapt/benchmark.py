"""Benchmark grid runner.

A benchmark is the cross product datasets x adapters x seeds. Each cell
fits (or trains) one adapter, embeds both splits with the frozen encoder,
fits a head, and records accuracy, wall time, status, and the number of
encoder forward passes. Results stream to a CSV that is append-only and
tagged with a hash of the scientific part of the configuration, so an
interrupted grid resumes exactly where it stopped and results from a
different configuration are rejected instead of silently mixed.

Accuracy columns are deterministic for a fixed config; only the wall-time
column varies between identical runs.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import adapters as ad
from .datasets import LabeledDataset, load_split
from .encoder import SurrogateEncoder, encode
from .errors import ConfigError, FormatError, InvalidArgument
from .lcomb import LcombAdapter, apply, new_lcomb
from .tensor import SeriesTensor
from .training import (
    RUN_STATUSES,
    STATUS_OK,
    RunRecord,
    TrainConfig,
    evaluate,
    train_head,
    train_lcomb_joint,
)

ADAPTER_KINDS = ("pca", "svd", "rand_proj", "var_select", "lcomb", "lcomb_top_k")

# Sparsity level used when lcomb_top_k is requested without an explicit k.
DEFAULT_TOP_K = 7

RESULTS_HEADER = (
    "dataset",
    "adapter",
    "seed",
    "accuracy",
    "wall_seconds",
    "status",
    "encoder_forward_passes",
    "steps_dropped",
)


@dataclass(frozen=True)
class AdapterSpec:
    id: str
    kind: str
    d_prime: int
    pws: int = 1
    scaled: bool = False
    k: int | None = None
    seed: int = 0


@dataclass(frozen=True)
class DatasetSpec:
    id: str
    train_path: str
    test_path: str
    format: str = "ts"


@dataclass(frozen=True)
class EncoderSpec:
    seed: int = 0
    patch_len: int = 8
    stride: int = 4
    embed_dim: int = 128


@dataclass(frozen=True)
class BenchmarkConfig:
    datasets: tuple[DatasetSpec, ...]
    adapters: tuple[AdapterSpec, ...]
    seeds: tuple[int, ...]
    encoder: EncoderSpec = EncoderSpec()
    train: TrainConfig = field(default_factory=TrainConfig)
    output_dir: str = "."


def _expect(condition: bool, path: str, message: str):
    if not condition:
        raise ConfigError(f"{path}: {message}")


def _get_map(obj, path: str) -> dict:
    _expect(isinstance(obj, dict), path, f"expected an object, got {type(obj).__name__}")
    return obj


def _get_str(obj: dict, path: str, key: str, default=None) -> str:
    if key not in obj:
        _expect(default is not None, f"{path}.{key}", "is required")
        return default
    v = obj[key]
    _expect(isinstance(v, str) and v != "", f"{path}.{key}", "expected a non-empty string")
    return v


def _get_int(obj: dict, path: str, key: str, default=None, minimum=None):
    if key not in obj:
        _expect(default is not None, f"{path}.{key}", "is required")
        return default
    v = obj[key]
    _expect(isinstance(v, int) and not isinstance(v, bool), f"{path}.{key}", "expected an integer")
    if minimum is not None:
        _expect(v >= minimum, f"{path}.{key}", f"must be at least {minimum}, got {v}")
    return v


def _get_num(obj: dict, path: str, key: str, default):
    if key not in obj:
        return default
    v = obj[key]
    _expect(
        isinstance(v, (int, float)) and not isinstance(v, bool),
        f"{path}.{key}",
        "expected a number",
    )
    return float(v)


def _get_bool(obj: dict, path: str, key: str, default):
    if key not in obj:
        return default
    v = obj[key]
    _expect(isinstance(v, bool), f"{path}.{key}", "expected true or false")
    return v


def _check_keys(obj: dict, path: str, allowed: tuple[str, ...]):
    unknown = sorted(set(obj) - set(allowed))
    _expect(not unknown, path, f"unknown key {unknown[0]!r}" if unknown else "")


def parse_config(obj: dict) -> BenchmarkConfig:
    """Validate a decoded JSON object field by field; errors carry dotted paths."""
    root = _get_map(obj, "config")
    _check_keys(root, "config", ("datasets", "adapters", "seeds", "encoder", "train", "output_dir"))

    raw_datasets = root.get("datasets")
    _expect(
        isinstance(raw_datasets, list) and len(raw_datasets) > 0,
        "config.datasets",
        "expected a non-empty list",
    )
    datasets = []
    for i, item in enumerate(raw_datasets):
        path = f"config.datasets[{i}]"
        entry = _get_map(item, path)
        _check_keys(entry, path, ("id", "train_path", "test_path", "format"))
        fmt = _get_str(entry, path, "format", default="ts")
        _expect(fmt in ("ts", "csv"), f"{path}.format", f"expected 'ts' or 'csv', got {fmt!r}")
        datasets.append(
            DatasetSpec(
                id=_get_str(entry, path, "id"),
                train_path=_get_str(entry, path, "train_path"),
                test_path=_get_str(entry, path, "test_path"),
                format=fmt,
            )
        )
    ids = [d.id for d in datasets]
    _expect(len(set(ids)) == len(ids), "config.datasets", "dataset ids must be unique")

    raw_adapters = root.get("adapters")
    _expect(
        isinstance(raw_adapters, list) and len(raw_adapters) > 0,
        "config.adapters",
        "expected a non-empty list",
    )
    specs = []
    for i, item in enumerate(raw_adapters):
        path = f"config.adapters[{i}]"
        entry = _get_map(item, path)
        _check_keys(entry, path, ("id", "kind", "d_prime", "pws", "scaled", "k", "seed"))
        kind = _get_str(entry, path, "kind")
        _expect(kind in ADAPTER_KINDS, f"{path}.kind", f"expected one of {ADAPTER_KINDS}, got {kind!r}")
        k = entry.get("k")
        if k is not None:
            _expect(
                isinstance(k, int) and not isinstance(k, bool) and k >= 1,
                f"{path}.k",
                "expected a positive integer or null",
            )
            _expect(
                kind in ("lcomb", "lcomb_top_k"),
                f"{path}.k",
                f"only applies to lcomb adapters, not {kind!r}",
            )
        pws = _get_int(entry, path, "pws", default=1, minimum=1)
        _expect(pws == 1 or kind == "pca", f"{path}.pws", f"only applies to pca, not {kind!r}")
        scaled = _get_bool(entry, path, "scaled", default=False)
        _expect(not scaled or kind == "pca", f"{path}.scaled", f"only applies to pca, not {kind!r}")
        specs.append(
            AdapterSpec(
                id=_get_str(entry, path, "id"),
                kind=kind,
                d_prime=_get_int(entry, path, "d_prime", minimum=1),
                pws=pws,
                scaled=scaled,
                k=k,
                seed=_get_int(entry, path, "seed", default=0, minimum=0),
            )
        )
    ids = [a.id for a in specs]
    _expect(len(set(ids)) == len(ids), "config.adapters", "adapter ids must be unique")

    raw_seeds = root.get("seeds", [0, 1, 2])
    _expect(
        isinstance(raw_seeds, list) and len(raw_seeds) > 0,
        "config.seeds",
        "expected a non-empty list of integers",
    )
    for i, s in enumerate(raw_seeds):
        _expect(
            isinstance(s, int) and not isinstance(s, bool) and s >= 0,
            f"config.seeds[{i}]",
            f"expected a non-negative integer, got {s!r}",
        )
    _expect(len(set(raw_seeds)) == len(raw_seeds), "config.seeds", "seeds must be unique")

    enc_obj = _get_map(root.get("encoder", {}), "config.encoder")
    _check_keys(enc_obj, "config.encoder", ("seed", "patch_len", "stride", "embed_dim"))
    encoder = EncoderSpec(
        seed=_get_int(enc_obj, "config.encoder", "seed", default=0, minimum=0),
        patch_len=_get_int(enc_obj, "config.encoder", "patch_len", default=8, minimum=1),
        stride=_get_int(enc_obj, "config.encoder", "stride", default=4, minimum=1),
        embed_dim=_get_int(enc_obj, "config.encoder", "embed_dim", default=128, minimum=1),
    )
    _expect(
        encoder.stride <= encoder.patch_len,
        "config.encoder.stride",
        f"must not exceed patch_len={encoder.patch_len}, got {encoder.stride}",
    )

    tr_obj = _get_map(root.get("train", {}), "config.train")
    _check_keys(tr_obj, "config.train", ("epochs", "learning_rate", "optimizer", "budget_seconds"))
    optimizer = _get_str(tr_obj, "config.train", "optimizer", default="adam")
    _expect(
        optimizer in ("sgd", "adam"),
        "config.train.optimizer",
        f"expected 'sgd' or 'adam', got {optimizer!r}",
    )
    lr = _get_num(tr_obj, "config.train", "learning_rate", 1e-2)
    _expect(lr > 0, "config.train.learning_rate", f"must be positive, got {lr}")
    budget = _get_num(tr_obj, "config.train", "budget_seconds", 7200.0)
    _expect(budget > 0, "config.train.budget_seconds", f"must be positive, got {budget}")
    train = TrainConfig(
        epochs=_get_int(tr_obj, "config.train", "epochs", default=200, minimum=0),
        learning_rate=lr,
        optimizer=optimizer,
        budget_seconds=budget,
    )

    output_dir = _get_str(root, "config", "output_dir", default=".")
    return BenchmarkConfig(
        datasets=tuple(datasets),
        adapters=tuple(specs),
        seeds=tuple(raw_seeds),
        encoder=encoder,
        train=train,
        output_dir=output_dir,
    )


def load_config(path) -> BenchmarkConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return parse_config(obj)


def config_hash(cfg: BenchmarkConfig) -> str:
    """Hash of everything that can change a result (output_dir excluded)."""
    payload = {
        "datasets": [
            {"id": d.id, "train_path": d.train_path, "test_path": d.test_path, "format": d.format}
            for d in cfg.datasets
        ],
        "adapters": [
            {
                "id": a.id,
                "kind": a.kind,
                "d_prime": a.d_prime,
                "pws": a.pws,
                "scaled": a.scaled,
                "k": a.k,
                "seed": a.seed,
            }
            for a in cfg.adapters
        ],
        "seeds": list(cfg.seeds),
        "encoder": {
            "seed": cfg.encoder.seed,
            "patch_len": cfg.encoder.patch_len,
            "stride": cfg.encoder.stride,
            "embed_dim": cfg.encoder.embed_dim,
        },
        "train": {
            "epochs": cfg.train.epochs,
            "learning_rate": cfg.train.learning_rate,
            "optimizer": cfg.train.optimizer,
            "budget_seconds": cfg.train.budget_seconds,
        },
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def run_seed_for(adapter_seed: int, run_seed: int) -> int:
    """Derive the generator seed for one run from the adapter and grid seeds.

    Uses a seed sequence over the pair, so every (adapter, run) combination
    gets an independent, reproducible stream.
    """
    ss = np.random.SeedSequence((int(adapter_seed), int(run_seed)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def fit_adapter_for_spec(spec: AdapterSpec, train_x: SeriesTensor, run_seed: int):
    """Fit the non-trainable reducer a spec describes (lcomb is trained elsewhere)."""
    if spec.kind == "pca":
        return ad.fit_pca(train_x, spec.d_prime, scaled=spec.scaled, pws=spec.pws)
    if spec.kind == "svd":
        return ad.fit_truncated_svd(train_x, spec.d_prime)
    if spec.kind == "rand_proj":
        return ad.fit_random_projection(train_x, spec.d_prime, run_seed_for(spec.seed, run_seed))
    if spec.kind == "var_select":
        return ad.fit_variance_selection(train_x, spec.d_prime)
    raise InvalidArgument(f"adapter kind {spec.kind!r} has no unsupervised fit")


def run_single(
    ds: LabeledDataset,
    dataset_id: str,
    spec: AdapterSpec,
    enc_spec: EncoderSpec,
    train_cfg: TrainConfig,
    run_seed: int,
) -> RunRecord:
    """Execute one grid cell and return its record.

    Non-trainable adapters embed each split exactly once, so the pass count
    is N_train + N_test. The joint lcomb path re-encodes the train split
    every epoch: N_train * epochs + N_test passes on an ok run.
    """
    t0 = time.perf_counter()
    n_classes = ds.train.n_classes
    enc = SurrogateEncoder(
        n_channels=spec.d_prime,
        patch_len=enc_spec.patch_len,
        stride=enc_spec.stride,
        embed_dim=enc_spec.embed_dim,
        seed=enc_spec.seed,
    )
    cfg_run = replace(train_cfg, seed=run_seed)
    if spec.kind in ("lcomb", "lcomb_top_k"):
        k = spec.k if spec.k is not None else (DEFAULT_TOP_K if spec.kind == "lcomb_top_k" else None)
        if k is not None:
            k = min(k, ds.train.x.n_channels)
        adapter = new_lcomb(ds.train.x.n_channels, spec.d_prime, k=k)
        adapter, head, rec = train_lcomb_joint(
            ds.train.x, ds.train.labels, enc, adapter, cfg_run, n_classes
        )
        passes = rec.encoder_forward_passes
        accuracy = None
        if rec.status == STATUS_OK:
            test_emb = encode(enc, apply(adapter, ds.test.x))
            passes += ds.test.x.n_samples
            accuracy = evaluate(head, test_emb, ds.test.labels)
        steps_dropped = 0
        status = rec.status
    else:
        reducer = fit_adapter_for_spec(spec, ds.train.x, run_seed)
        train_z = ad.transform(reducer, ds.train.x)
        test_z = ad.transform(reducer, ds.test.x)
        train_emb = encode(enc, train_z)
        test_emb = encode(enc, test_z)
        passes = ds.train.x.n_samples + ds.test.x.n_samples
        head, rec = train_head(train_emb, ds.train.labels, cfg_run, n_classes)
        accuracy = evaluate(head, test_emb, ds.test.labels) if rec.status == STATUS_OK else None
        steps_dropped = ds.train.x.n_steps - reducer.truncated_steps if reducer.pws > 1 else 0
        status = rec.status
    return RunRecord(
        dataset_id=dataset_id,
        adapter_id=spec.id,
        seed=run_seed,
        accuracy=accuracy,
        wall_seconds=time.perf_counter() - t0,
        status=status,
        encoder_forward_passes=passes,
        steps_dropped=steps_dropped,
    )


# ---------------------------------------------------------------------------
# results CSV


def format_record(rec: RunRecord) -> str:
    acc = "" if rec.accuracy is None else "%.17g" % rec.accuracy
    return ",".join(
        [
            rec.dataset_id,
            rec.adapter_id,
            str(rec.seed),
            acc,
            "%.6g" % rec.wall_seconds,
            rec.status,
            str(rec.encoder_forward_passes),
            str(rec.steps_dropped),
        ]
    )


def parse_results(text: str) -> tuple[str | None, list[RunRecord]]:
    """Read a results CSV back into records; returns (config hash, rows)."""
    lines = text.splitlines()
    if not lines:
        raise FormatError("results file is empty")
    pos = 0
    cfg_hash = None
    if lines[0].startswith("#"):
        head = lines[0][1:].strip()
        if not head.startswith("config_hash="):
            raise FormatError(f"results line 1: unrecognized comment {lines[0]!r}")
        cfg_hash = head.split("=", 1)[1]
        pos = 1
    if pos >= len(lines) or tuple(lines[pos].split(",")) != RESULTS_HEADER:
        raise FormatError(
            f"results line {pos + 1}: expected header {','.join(RESULTS_HEADER)}"
        )
    records = []
    for idx in range(pos + 1, len(lines)):
        line = lines[idx].strip()
        lineno = idx + 1
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != len(RESULTS_HEADER):
            raise FormatError(
                f"results line {lineno}: expected {len(RESULTS_HEADER)} fields, got {len(parts)}"
            )
        dataset, adapter, seed_s, acc_s, wall_s, status, passes_s, dropped_s = parts
        if status not in RUN_STATUSES:
            raise FormatError(f"results line {lineno}: unknown status {status!r}")
        try:
            seed = int(seed_s)
            wall = float(wall_s)
            passes = int(passes_s)
            dropped = int(dropped_s)
            acc = None if acc_s == "" else float(acc_s)
        except ValueError as exc:
            raise FormatError(f"results line {lineno}: {exc}") from None
        if (acc is None) != (status != STATUS_OK):
            raise FormatError(
                f"results line {lineno}: accuracy must be present exactly when status is ok"
            )
        records.append(
            RunRecord(
                dataset_id=dataset,
                adapter_id=adapter,
                seed=seed,
                accuracy=acc,
                wall_seconds=wall,
                status=status,
                encoder_forward_passes=passes,
                steps_dropped=dropped,
            )
        )
    return cfg_hash, records


def read_results(path) -> tuple[str | None, list[RunRecord]]:
    return parse_results(Path(path).read_text(encoding="utf-8"))


def run_grid(
    cfg: BenchmarkConfig,
    out_path,
    jobs: int = 1,
    log=None,
) -> list[RunRecord]:
    """Run every (dataset, adapter, seed) cell, streaming rows to ``out_path``.

    If the file already exists its config hash must match and completed
    cells are kept, not rerun. Rows are always appended in grid order, even
    when ``jobs > 1`` computes them out of order, so two complete runs of
    the same config differ only in wall-clock columns.
    """
    if jobs < 1:
        raise InvalidArgument(f"jobs must be at least 1, got {jobs}")
    out_path = Path(out_path)
    expected_hash = config_hash(cfg)
    done: dict[tuple[str, str, int], RunRecord] = {}
    if out_path.exists():
        found_hash, existing = read_results(out_path)
        if found_hash != expected_hash:
            raise ConfigError(
                f"results file {out_path} was produced by config hash {found_hash}, "
                f"but this config hashes to {expected_hash}; refusing to mix results"
            )
        for rec in existing:
            done[(rec.dataset_id, rec.adapter_id, rec.seed)] = rec
    else:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(f"# config_hash={expected_hash}\n")
            fh.write(",".join(RESULTS_HEADER) + "\n")

    data = {spec.id: _load_dataset(spec) for spec in cfg.datasets}
    grid = [
        (ds_spec, a_spec, seed)
        for ds_spec in cfg.datasets
        for a_spec in cfg.adapters
        for seed in cfg.seeds
    ]
    pending = [cell for cell in grid if (cell[0].id, cell[1].id, cell[2]) not in done]

    def compute(cell) -> RunRecord:
        ds_spec, a_spec, seed = cell
        return run_single(data[ds_spec.id], ds_spec.id, a_spec, cfg.encoder, cfg.train, seed)

    results: dict[tuple[str, str, int], RunRecord] = {}
    with open(out_path, "a", encoding="utf-8") as fh:
        def flush(rec: RunRecord):
            fh.write(format_record(rec) + "\n")
            fh.flush()
            if log is not None:
                log(
                    f"{rec.dataset_id}/{rec.adapter_id}/seed={rec.seed}: "
                    f"status={rec.status}"
                    + (f" accuracy={rec.accuracy:.4f}" if rec.accuracy is not None else "")
                )

        if jobs == 1:
            for cell in pending:
                rec = compute(cell)
                results[(cell[0].id, cell[1].id, cell[2])] = rec
                flush(rec)
        else:
            # Compute in parallel but write strictly in grid order.
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                futures = {cell: pool.submit(compute, cell) for cell in pending}
                for cell in pending:
                    rec = futures[cell].result()
                    results[(cell[0].id, cell[1].id, cell[2])] = rec
                    flush(rec)

    out = []
    for ds_spec, a_spec, seed in grid:
        key = (ds_spec.id, a_spec.id, seed)
        out.append(done.get(key) or results[key])
    return out


def _load_dataset(spec: DatasetSpec) -> LabeledDataset:
    train = load_split(spec.train_path, spec.format)
    test = load_split(spec.test_path, spec.format)
    return LabeledDataset(train=train, test=test)
