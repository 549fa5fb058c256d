"""Dataset records, file formats, and synthetic generators.

Two on-disk formats are supported and round-trip losslessly:

* the ``.ts`` classification format: ``@``-directives, then one line per
  sample with ``:``-separated dimensions of comma-separated values and a
  trailing class label. Labels map to indices in the order they appear in
  the ``@classLabel`` declaration. Only equal-length, no-missing data is
  accepted, and parse errors cite the offending line number.
* a long-form CSV pair: values as ``(sample, step, channel, value)`` rows
  plus a labels sidecar of ``(sample, class_index, class_name)`` rows.
  Values are written with 17 significant digits, so a parse of an emit is
  bit-identical.

The module also carries the reference manifest of the twelve UEA archive
subsets used in the benchmark and two seeded synthetic generators with known
structure, used as ground truth in tests.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, InvalidArgument
from .tensor import SeriesTensor

_VALUES_HEADER = ("sample", "step", "channel", "value")
_LABELS_HEADER = ("sample", "class_index", "class_name")


def _check_class_names(class_names) -> tuple[str, ...]:
    names = tuple(class_names)
    if len(names) < 1:
        raise InvalidArgument("class_names must be non-empty")
    if len(set(names)) != len(names):
        raise InvalidArgument(f"class_names contain duplicates: {names}")
    for name in names:
        if not isinstance(name, str) or not name:
            raise InvalidArgument(f"class names must be non-empty strings, got {name!r}")
        if any(ch.isspace() for ch in name) or ":" in name or "," in name:
            raise InvalidArgument(
                f"class name {name!r} contains whitespace, ':' or ','; "
                "it could not be re-read from either file format"
            )
    return names


@dataclass(frozen=True)
class DatasetSplit:
    """One split: a series tensor, integer labels, and the class name table."""

    x: SeriesTensor
    labels: np.ndarray
    class_names: tuple[str, ...]
    problem_name: str = "dataset"

    def __post_init__(self):
        names = _check_class_names(self.class_names)
        labels = np.asarray(self.labels)
        if labels.ndim != 1 or labels.shape[0] != self.x.n_samples:
            raise InvalidArgument(
                f"labels must be 1-d with one entry per sample ({self.x.n_samples}), "
                f"got shape {labels.shape}"
            )
        if not np.issubdtype(labels.dtype, np.integer):
            raise InvalidArgument(f"labels must be integers, got dtype {labels.dtype}")
        labels = np.ascontiguousarray(labels.astype(np.int64))
        if labels.size and (labels.min() < 0 or labels.max() >= len(names)):
            raise InvalidArgument(
                f"labels must lie in [0, {len(names)}), got range "
                f"[{labels.min()}, {labels.max()}]"
            )
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "class_names", names)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)


@dataclass(frozen=True)
class LabeledDataset:
    """Train and test splits with matching channel and class structure."""

    train: DatasetSplit
    test: DatasetSplit

    def __post_init__(self):
        if self.train.x.n_channels != self.test.x.n_channels:
            raise InvalidArgument(
                f"train has {self.train.x.n_channels} channels but test has "
                f"{self.test.x.n_channels}"
            )
        if self.train.x.n_steps != self.test.x.n_steps:
            raise InvalidArgument(
                f"train series length {self.train.x.n_steps} differs from test "
                f"length {self.test.x.n_steps}"
            )
        if self.train.class_names != self.test.class_names:
            raise InvalidArgument(
                f"train classes {self.train.class_names} differ from test classes "
                f"{self.test.class_names}"
            )


@dataclass(frozen=True)
class DatasetManifestEntry:
    name: str
    train_size: int
    test_size: int
    n_channels: int
    seq_len: int
    n_classes: int


# The twelve UEA archive subsets the benchmark targets. InsectWingbeat uses
# the 1000/1000 subsample of the original 30k/20k splits.
UEA_MANIFEST: tuple[DatasetManifestEntry, ...] = (
    DatasetManifestEntry("DuckDuckGeese", 60, 40, 1345, 270, 5),
    DatasetManifestEntry("FaceDetection", 5890, 3524, 144, 62, 2),
    DatasetManifestEntry("FingerMovements", 316, 100, 28, 50, 2),
    DatasetManifestEntry("HandMovementDirection", 320, 147, 10, 400, 4),
    DatasetManifestEntry("Heartbeat", 204, 205, 61, 405, 2),
    DatasetManifestEntry("InsectWingbeat", 1000, 1000, 200, 78, 10),
    DatasetManifestEntry("JapaneseVowels", 270, 370, 12, 29, 9),
    DatasetManifestEntry("MotorImagery", 278, 100, 64, 3000, 2),
    DatasetManifestEntry("NATOPS", 180, 180, 24, 51, 6),
    DatasetManifestEntry("PEMS-SF", 267, 173, 963, 144, 7),
    DatasetManifestEntry("PhonemeSpectra", 3315, 3353, 11, 217, 39),
    DatasetManifestEntry("SpokenArabicDigits", 6599, 2199, 13, 93, 10),
)


@dataclass(frozen=True)
class ManifestReport:
    """Outcome of checking a dataset against its manifest entry."""

    name: str
    ok: bool
    mismatches: tuple[str, ...]


def validate_manifest(ds: LabeledDataset, entry: DatasetManifestEntry) -> ManifestReport:
    """Compare a loaded dataset against the expected sizes; list every mismatch."""
    observed = {
        "train_size": ds.train.x.n_samples,
        "test_size": ds.test.x.n_samples,
        "n_channels": ds.train.x.n_channels,
        "seq_len": ds.train.x.n_steps,
        "n_classes": ds.train.n_classes,
    }
    expected = {
        "train_size": entry.train_size,
        "test_size": entry.test_size,
        "n_channels": entry.n_channels,
        "seq_len": entry.seq_len,
        "n_classes": entry.n_classes,
    }
    mismatches = tuple(
        f"{field}: expected {expected[field]}, got {observed[field]}"
        for field in expected
        if expected[field] != observed[field]
    )
    return ManifestReport(name=entry.name, ok=not mismatches, mismatches=mismatches)


# ---------------------------------------------------------------------------
# .ts format


def _parse_bool(value: str, lineno: int, directive: str) -> bool:
    lowered = value.strip().lower()
    if lowered == "true":
        return True
    if lowered == "false":
        return False
    raise FormatError(f"line {lineno}: {directive} expects true or false, got {value.strip()!r}")


def _parse_pos_int(value: str, lineno: int, directive: str) -> int:
    try:
        parsed = int(value.strip())
    except ValueError:
        raise FormatError(
            f"line {lineno}: {directive} expects an integer, got {value.strip()!r}"
        ) from None
    if parsed < 1:
        raise FormatError(f"line {lineno}: {directive} must be positive, got {parsed}")
    return parsed


def parse_ts(text: str) -> DatasetSplit:
    """Parse the classification ``.ts`` format.

    Accepts ``#`` comment lines, the usual header directives, then ``@data``.
    ``@classLabel true <name ...>`` is required and fixes the label-to-index
    mapping by declaration order. ``@equalLength false``, timestamps, and
    missing values are rejected. Every reported error names its line.
    """
    lines = text.splitlines()
    problem_name = None
    dims_declared = None
    length_declared = None
    class_names = None
    data_start = None
    for idx, raw in enumerate(lines):
        lineno = idx + 1
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not line.startswith("@"):
            raise FormatError(f"line {lineno}: data line before @data directive")
        parts = line.split(None, 1)
        tag = parts[0].lower()
        rest = parts[1].strip() if len(parts) > 1 else ""
        if tag == "@data":
            if rest:
                raise FormatError(f"line {lineno}: @data takes no value")
            data_start = idx + 1
            break
        if not rest:
            raise FormatError(f"line {lineno}: directive {parts[0]} is missing its value")
        if tag == "@problemname":
            problem_name = rest
        elif tag == "@univariate":
            if _parse_bool(rest, lineno, "@univariate"):
                dims_declared = 1
        elif tag == "@dimensions":
            dims_declared = _parse_pos_int(rest, lineno, "@dimensions")
        elif tag == "@equallength":
            if not _parse_bool(rest, lineno, "@equalLength"):
                raise FormatError(
                    f"line {lineno}: @equalLength false is not supported; "
                    "all series must share one length"
                )
        elif tag == "@serieslength":
            length_declared = _parse_pos_int(rest, lineno, "@seriesLength")
        elif tag == "@timestamps":
            if _parse_bool(rest, lineno, "@timestamps"):
                raise FormatError(f"line {lineno}: timestamped series are not supported")
        elif tag == "@missing":
            if _parse_bool(rest, lineno, "@missing"):
                raise FormatError(f"line {lineno}: missing values are not supported")
        elif tag == "@classlabel":
            tokens = rest.split()
            flag = tokens[0].lower() if tokens else ""
            if flag == "false":
                raise FormatError(
                    f"line {lineno}: @classLabel false is not supported; labels are required"
                )
            if flag != "true":
                raise FormatError(
                    f"line {lineno}: @classLabel expects 'true' followed by the label names"
                )
            if len(tokens) < 2:
                raise FormatError(f"line {lineno}: @classLabel true lists no label names")
            if len(set(tokens[1:])) != len(tokens[1:]):
                raise FormatError(f"line {lineno}: @classLabel names contain duplicates")
            class_names = tokens[1:]
        else:
            raise FormatError(f"line {lineno}: unknown directive {parts[0]!r}")
    if data_start is None:
        raise FormatError("missing @data directive")
    if class_names is None:
        raise FormatError("missing @classLabel directive")
    label_to_idx = {name: i for i, name in enumerate(class_names)}

    series: list[np.ndarray] = []
    labels: list[int] = []
    n_dims = None
    t_len = None
    for idx in range(data_start, len(lines)):
        lineno = idx + 1
        line = lines[idx].strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(":")
        if len(fields) < 2:
            raise FormatError(
                f"line {lineno}: expected ':'-separated dimensions followed by a class label"
            )
        label_token = fields[-1].strip()
        if label_token not in label_to_idx:
            raise FormatError(
                f"line {lineno}: unknown class label {label_token!r}; "
                f"declared labels are {class_names}"
            )
        dims = []
        for dim_idx, dim_text in enumerate(fields[:-1]):
            tokens = dim_text.split(",")
            vals = []
            for tok in tokens:
                token = tok.strip()
                try:
                    value = float(token)
                except ValueError:
                    raise FormatError(
                        f"line {lineno}: non-numeric value {token!r} in dimension {dim_idx}"
                    ) from None
                if not math.isfinite(value):
                    raise FormatError(
                        f"line {lineno}: non-finite value {token!r} in dimension {dim_idx}"
                    )
                vals.append(value)
            dims.append(vals)
        lengths = sorted({len(v) for v in dims})
        if len(lengths) != 1:
            raise FormatError(
                f"line {lineno}: dimensions have unequal lengths {lengths}"
            )
        if n_dims is None:
            n_dims, t_len = len(dims), lengths[0]
        if len(dims) != n_dims:
            raise FormatError(
                f"line {lineno}: expected {n_dims} dimensions, got {len(dims)}"
            )
        if lengths[0] != t_len:
            raise FormatError(
                f"line {lineno}: expected series length {t_len}, got {lengths[0]}"
            )
        series.append(np.array(dims, dtype=np.float64).T)
        labels.append(label_to_idx[label_token])
    if not series:
        raise FormatError("no data lines after @data")
    if dims_declared is not None and dims_declared != n_dims:
        raise FormatError(
            f"header declares {dims_declared} dimensions but data lines have {n_dims}"
        )
    if length_declared is not None and length_declared != t_len:
        raise FormatError(
            f"header declares series length {length_declared} but data lines have {t_len}"
        )
    return DatasetSplit(
        x=SeriesTensor(np.stack(series)),
        labels=np.array(labels, dtype=np.int64),
        class_names=tuple(class_names),
        problem_name=problem_name or "dataset",
    )


def emit_ts(split: DatasetSplit) -> str:
    """Write a split in the ``.ts`` format with full-precision values."""
    x = split.x
    out = [
        f"@problemName {split.problem_name}",
        "@timestamps false",
        "@missing false",
        f"@univariate {'true' if x.n_channels == 1 else 'false'}",
        f"@dimensions {x.n_channels}",
        "@equalLength true",
        f"@seriesLength {x.n_steps}",
        "@classLabel true " + " ".join(split.class_names),
        "@data",
    ]
    for i in range(x.n_samples):
        dims = [
            ",".join("%.17g" % v for v in x.values[i, :, d])
            for d in range(x.n_channels)
        ]
        out.append(":".join(dims) + ":" + split.class_names[split.labels[i]])
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# long-form CSV


def _csv_rows(text: str, expected_header: tuple[str, ...], what: str):
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError(f"{what} csv is empty; expected header {','.join(expected_header)}") from None
    if tuple(h.strip() for h in header) != expected_header:
        raise FormatError(
            f"{what} csv has header {','.join(header)!r}, expected {','.join(expected_header)!r}"
        )
    rows = []
    for row in reader:
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(expected_header):
            raise FormatError(
                f"{what} csv line {reader.line_num}: expected {len(expected_header)} fields, "
                f"got {len(row)}"
            )
        rows.append((reader.line_num, row))
    return rows


def _csv_int(token: str, lineno: int, column: str, what: str) -> int:
    try:
        return int(token.strip())
    except ValueError:
        raise FormatError(
            f"{what} csv line {lineno}: column {column!r} must be an integer, got {token.strip()!r}"
        ) from None


def parse_csv(values_text: str, labels_text: str) -> DatasetSplit:
    """Parse the long-form value rows together with the labels sidecar.

    Value rows may arrive in any order but must cover the full
    ``samples x steps x channels`` grid exactly once; the first gap or
    duplicate is reported by its coordinates. The sidecar must label every
    sample and define a contiguous, consistent class index table.
    """
    value_rows = _csv_rows(values_text, _VALUES_HEADER, "values")
    if not value_rows:
        raise FormatError("values csv has a header but no rows")
    parsed = []
    for lineno, row in value_rows:
        s = _csv_int(row[0], lineno, "sample", "values")
        t = _csv_int(row[1], lineno, "step", "values")
        c = _csv_int(row[2], lineno, "channel", "values")
        if min(s, t, c) < 0:
            raise FormatError(f"values csv line {lineno}: negative index in ({s}, {t}, {c})")
        try:
            v = float(row[3])
        except ValueError:
            raise FormatError(
                f"values csv line {lineno}: column 'value' must be a number, got {row[3].strip()!r}"
            ) from None
        if not math.isfinite(v):
            raise FormatError(f"values csv line {lineno}: non-finite value {row[3].strip()!r}")
        parsed.append((s, t, c, v, lineno))
    n = max(p[0] for p in parsed) + 1
    t_len = max(p[1] for p in parsed) + 1
    d = max(p[2] for p in parsed) + 1
    values = np.zeros((n, t_len, d))
    seen = np.zeros((n, t_len, d), dtype=bool)
    for s, t, c, v, lineno in parsed:
        if seen[s, t, c]:
            raise FormatError(
                f"values csv line {lineno}: duplicate cell (sample={s}, step={t}, channel={c})"
            )
        seen[s, t, c] = True
        values[s, t, c] = v
    if not seen.all():
        s, t, c = np.unravel_index(int(np.argmin(seen)), seen.shape)
        raise FormatError(
            f"values csv is missing cell (sample={s}, step={t}, channel={c}); "
            f"expected a full {n} x {t_len} x {d} grid"
        )

    label_rows = _csv_rows(labels_text, _LABELS_HEADER, "labels")
    if not label_rows:
        raise FormatError("labels csv has a header but no rows")
    sample_to_idx: dict[int, int] = {}
    idx_to_name: dict[int, str] = {}
    for lineno, row in label_rows:
        s = _csv_int(row[0], lineno, "sample", "labels")
        k = _csv_int(row[1], lineno, "class_index", "labels")
        name = row[2].strip()
        if s in sample_to_idx:
            raise FormatError(f"labels csv line {lineno}: duplicate label for sample {s}")
        if k < 0:
            raise FormatError(f"labels csv line {lineno}: negative class_index {k}")
        if not name:
            raise FormatError(f"labels csv line {lineno}: empty class_name")
        if k in idx_to_name and idx_to_name[k] != name:
            raise FormatError(
                f"labels csv line {lineno}: class_index {k} maps to both "
                f"{idx_to_name[k]!r} and {name!r}"
            )
        idx_to_name[k] = name
        sample_to_idx[s] = k
    missing = sorted(set(range(n)) - set(sample_to_idx))
    if missing:
        raise FormatError(f"labels csv is missing sample {missing[0]}")
    extra = sorted(set(sample_to_idx) - set(range(n)))
    if extra:
        raise FormatError(
            f"labels csv labels sample {extra[0]} but values csv has only {n} samples"
        )
    n_classes = max(idx_to_name) + 1
    gaps = sorted(set(range(n_classes)) - set(idx_to_name))
    if gaps:
        raise FormatError(
            f"labels csv class indices are not contiguous: index {gaps[0]} is never used"
        )
    names = tuple(idx_to_name[k] for k in range(n_classes))
    if len(set(names)) != len(names):
        raise FormatError(f"labels csv assigns one class name to two indices: {names}")
    labels = np.array([sample_to_idx[s] for s in range(n)], dtype=np.int64)
    return DatasetSplit(
        x=SeriesTensor(values), labels=labels, class_names=names
    )


def emit_csv(split: DatasetSplit) -> tuple[str, str]:
    """Long-form rows in (sample, step, channel) order plus the labels sidecar."""
    x = split.x
    values_out = io.StringIO()
    writer = csv.writer(values_out, lineterminator="\n")
    writer.writerow(_VALUES_HEADER)
    for s in range(x.n_samples):
        for t in range(x.n_steps):
            for c in range(x.n_channels):
                writer.writerow([s, t, c, "%.17g" % x.values[s, t, c]])
    labels_out = io.StringIO()
    writer = csv.writer(labels_out, lineterminator="\n")
    writer.writerow(_LABELS_HEADER)
    for s in range(x.n_samples):
        k = int(split.labels[s])
        writer.writerow([s, k, split.class_names[k]])
    return values_out.getvalue(), labels_out.getvalue()


# ---------------------------------------------------------------------------
# files


def labels_sidecar_path(values_path) -> Path:
    p = Path(values_path)
    return p.with_name(p.stem + "_labels" + p.suffix)


def infer_format(path, fmt: str | None) -> str:
    if fmt is not None:
        if fmt not in ("ts", "csv"):
            raise InvalidArgument(f"format must be 'ts' or 'csv', got {fmt!r}")
        return fmt
    suffix = Path(path).suffix.lower()
    if suffix == ".ts":
        return "ts"
    if suffix == ".csv":
        return "csv"
    raise InvalidArgument(
        f"cannot infer format from {Path(path).name!r}; pass 'ts' or 'csv' explicitly"
    )


def load_split(path, fmt: str | None = None) -> DatasetSplit:
    """Read a split from disk; CSV input expects the ``*_labels`` sidecar."""
    fmt = infer_format(path, fmt)
    if fmt == "ts":
        text = Path(path).read_text(encoding="utf-8")
        return parse_ts(text)
    values_text = Path(path).read_text(encoding="utf-8")
    labels_text = labels_sidecar_path(path).read_text(encoding="utf-8")
    return parse_csv(values_text, labels_text)


def save_split(split: DatasetSplit, path, fmt: str | None = None) -> None:
    """Write a split to disk; CSV output also writes the ``*_labels`` sidecar."""
    fmt = infer_format(path, fmt)
    if fmt == "ts":
        Path(path).write_text(emit_ts(split), encoding="utf-8")
        return
    values_text, labels_text = emit_csv(split)
    Path(path).write_text(values_text, encoding="utf-8")
    labels_sidecar_path(path).write_text(labels_text, encoding="utf-8")


# ---------------------------------------------------------------------------
# synthetic generators


def _class_names(n_classes: int) -> tuple[str, ...]:
    return tuple(f"c{i}" for i in range(n_classes))


def synth_lowrank(
    n: int,
    t: int,
    d: int,
    rank: int,
    n_classes: int,
    noise: float,
    seed: int,
) -> LabeledDataset:
    """Class-dependent sinusoids in a shared ``rank``-dimensional channel subspace.

    Each sample stacks ``rank`` latent sinusoids whose frequencies encode the
    class (latent ``j`` of class ``y`` has frequency ``1 + 2y + 0.75j``) with
    a random phase, mixed into ``d`` channels through one Gaussian matrix
    shared by both splits, plus isotropic noise of the given scale. With
    ``noise=0`` every sample matrix has rank at most ``rank``. Labels cycle
    ``0, 1, ..., n_classes-1``, so splits are balanced. Deterministic in
    ``seed``.
    """
    if not (1 <= rank <= d):
        raise InvalidArgument(f"rank must lie in [1, d={d}], got {rank}")
    if n_classes < 2:
        raise InvalidArgument(f"n_classes must be at least 2, got {n_classes}")
    if n < n_classes:
        raise InvalidArgument(f"n={n} is too small to cover {n_classes} classes")
    if t < 2:
        raise InvalidArgument(f"t must be at least 2, got {t}")
    if noise < 0:
        raise InvalidArgument(f"noise must be non-negative, got {noise}")
    rng = np.random.default_rng(np.random.PCG64(int(seed)))
    mix = rng.normal(size=(rank, d))
    tgrid = np.arange(t) / t

    def make_split() -> DatasetSplit:
        values = np.empty((n, t, d))
        labels = np.empty(n, dtype=np.int64)
        for i in range(n):
            label = i % n_classes
            latent = np.empty((t, rank))
            for j in range(rank):
                freq = 1.0 + 2.0 * label + 0.75 * j
                phase = rng.uniform(0.0, 2.0 * np.pi)
                latent[:, j] = np.sin(2.0 * np.pi * freq * tgrid + phase)
            values[i] = latent @ mix + noise * rng.normal(size=(t, d))
            labels[i] = label
        return DatasetSplit(
            x=SeriesTensor(values), labels=labels, class_names=_class_names(n_classes)
        )

    return LabeledDataset(train=make_split(), test=make_split())


def synth_noisy_channel(
    n: int,
    t: int,
    signal_amplitude: float,
    d_noise: int,
    noise_scale: float,
    seed: int,
    n_classes: int = 2,
) -> LabeledDataset:
    """Channel 0 carries the class signal; the rest is louder Gaussian noise.

    Channel 0 is a sinusoid with class-coded frequency ``2 + 3y`` and random
    phase, scaled by ``signal_amplitude``; channels ``1..d_noise`` are i.i.d.
    noise with std ``noise_scale``. Requiring ``noise_scale`` to exceed the
    amplitude makes the noise channels the highest-variance ones (a sinusoid
    of amplitude A has variance about A^2/2), so variance-ranked selection
    provably prefers the wrong channels here.
    """
    if signal_amplitude <= 0:
        raise InvalidArgument(f"signal_amplitude must be positive, got {signal_amplitude}")
    if noise_scale <= signal_amplitude:
        raise InvalidArgument(
            f"noise_scale ({noise_scale}) must exceed signal_amplitude "
            f"({signal_amplitude}) so the noise channels dominate the variance ranking"
        )
    if d_noise < 1:
        raise InvalidArgument(f"d_noise must be at least 1, got {d_noise}")
    if n_classes < 2:
        raise InvalidArgument(f"n_classes must be at least 2, got {n_classes}")
    if n < n_classes:
        raise InvalidArgument(f"n={n} is too small to cover {n_classes} classes")
    if t < 2:
        raise InvalidArgument(f"t must be at least 2, got {t}")
    rng = np.random.default_rng(np.random.PCG64(int(seed)))
    tgrid = np.arange(t) / t
    d = 1 + d_noise

    def make_split() -> DatasetSplit:
        values = np.empty((n, t, d))
        labels = np.empty(n, dtype=np.int64)
        for i in range(n):
            label = i % n_classes
            phase = rng.uniform(0.0, 2.0 * np.pi)
            freq = 2.0 + 3.0 * label
            values[i, :, 0] = signal_amplitude * np.sin(2.0 * np.pi * freq * tgrid + phase)
            values[i, :, 1:] = rng.normal(0.0, noise_scale, size=(t, d_noise))
            labels[i] = label
        return DatasetSplit(
            x=SeriesTensor(values), labels=labels, class_names=_class_names(n_classes)
        )

    return LabeledDataset(train=make_split(), test=make_split())
