"""Channel-reduction adapters and a benchmark harness for multivariate series.

The package fits linear channel reducers (PCA variants, truncated SVD,
random projection, variance selection, and a trainable combiner) in front
of a frozen random-feature encoder, trains linear heads on the embeddings,
and compares methods with Welch t-tests and average ranks.
"""

from .adapters import (
    ChannelReducer,
    fit_pca,
    fit_random_projection,
    fit_truncated_svd,
    fit_variance_selection,
    transform,
)
from .benchmark import (
    AdapterSpec,
    BenchmarkConfig,
    DatasetSpec,
    EncoderSpec,
    config_hash,
    load_config,
    parse_config,
    read_results,
    run_grid,
    run_seed_for,
    run_single,
)
from .datasets import (
    DatasetManifestEntry,
    DatasetSplit,
    LabeledDataset,
    UEA_MANIFEST,
    load_split,
    parse_csv,
    parse_ts,
    save_split,
    synth_lowrank,
    synth_noisy_channel,
    validate_manifest,
)
from .encoder import SurrogateEncoder, encode, encode_backward
from .errors import (
    ConfigError,
    DegenerateLabels,
    FormatError,
    InvalidArgument,
    TsadaptError,
    UnderdeterminedFit,
)
from .lcomb import LcombAdapter, apply, apply_backward, attention, new_lcomb
from .report import ReportTables, build_report, write_report
from .serialize import dumps_reducer, load_reducer, loads_reducer, save_reducer
from .stats import (
    MethodSample,
    PairwiseMatrix,
    WelchResult,
    average_rank,
    pairwise_pvalues,
    regularized_incomplete_beta,
    summarize,
    welch_t_test,
)
from .tensor import PatchView, SeriesTensor, channel_moments, flatten_time, patchify, unpatchify
from .training import (
    LinearHead,
    RunRecord,
    TrainConfig,
    cross_entropy,
    evaluate,
    train_head,
    train_lcomb_joint,
)

__version__ = "0.1.0"

__all__ = [
    "AdapterSpec",
    "BenchmarkConfig",
    "ChannelReducer",
    "ConfigError",
    "DatasetManifestEntry",
    "DatasetSpec",
    "DatasetSplit",
    "DegenerateLabels",
    "EncoderSpec",
    "FormatError",
    "InvalidArgument",
    "LabeledDataset",
    "LcombAdapter",
    "LinearHead",
    "MethodSample",
    "UEA_MANIFEST",
    "PairwiseMatrix",
    "PatchView",
    "ReportTables",
    "RunRecord",
    "SeriesTensor",
    "SurrogateEncoder",
    "TrainConfig",
    "TsadaptError",
    "UnderdeterminedFit",
    "WelchResult",
    "apply",
    "apply_backward",
    "attention",
    "average_rank",
    "build_report",
    "channel_moments",
    "config_hash",
    "cross_entropy",
    "dumps_reducer",
    "encode",
    "encode_backward",
    "evaluate",
    "fit_pca",
    "fit_random_projection",
    "fit_truncated_svd",
    "fit_variance_selection",
    "flatten_time",
    "load_config",
    "load_reducer",
    "load_split",
    "loads_reducer",
    "new_lcomb",
    "pairwise_pvalues",
    "parse_config",
    "parse_csv",
    "parse_ts",
    "patchify",
    "read_results",
    "regularized_incomplete_beta",
    "run_grid",
    "run_seed_for",
    "run_single",
    "save_reducer",
    "save_split",
    "summarize",
    "synth_lowrank",
    "synth_noisy_channel",
    "train_head",
    "train_lcomb_joint",
    "transform",
    "unpatchify",
    "validate_manifest",
    "welch_t_test",
    "write_report",
]
