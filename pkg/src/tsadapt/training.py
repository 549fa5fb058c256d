"""Full-batch training for linear heads and channel combiners.

Two entry points:

* :func:`train_head` fits a linear softmax classifier on precomputed
  embeddings. The encoder runs once per split, so this is the cheap path.
* :func:`train_lcomb_joint` trains a :class:`~tsadapt.lcomb.LcombAdapter`
  together with a head, re-encoding the mixed series every epoch and
  backpropagating through the encoder by hand. This is the expensive path;
  both record their encoder pass counts so the cost difference is auditable.

Optimizers are plain full-batch SGD and Adam; parameters start at zero, and
the wall-clock budget is checked between epochs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .encoder import SurrogateEncoder, encode, encode_backward
from .errors import DegenerateLabels, InvalidArgument
from .lcomb import LcombAdapter, apply, apply_backward
from .tensor import SeriesTensor

STATUS_OK = "ok"
STATUS_BUDGET = "budget_exceeded"
STATUS_MEMORY = "memory_exceeded"

RUN_STATUSES = (STATUS_OK, STATUS_BUDGET, STATUS_MEMORY)


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters shared by both training paths."""

    epochs: int = 200
    learning_rate: float = 1e-2
    optimizer: str = "adam"
    budget_seconds: float = 7200.0
    seed: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        if not isinstance(self.epochs, (int, np.integer)) or isinstance(self.epochs, bool) or self.epochs < 0:
            raise InvalidArgument(f"epochs must be a non-negative integer, got {self.epochs!r}")
        if not (self.learning_rate > 0):
            raise InvalidArgument(f"learning_rate must be positive, got {self.learning_rate!r}")
        if self.optimizer not in ("sgd", "adam"):
            raise InvalidArgument(f"optimizer must be 'sgd' or 'adam', got {self.optimizer!r}")
        if not (self.budget_seconds > 0):
            raise InvalidArgument(f"budget_seconds must be positive, got {self.budget_seconds!r}")


@dataclass(frozen=True)
class LinearHead:
    """Softmax classifier: logits = emb @ weights.T + bias."""

    weights: np.ndarray  # (n_classes, embed_dim)
    bias: np.ndarray  # (n_classes,)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64, order="C")
        b = np.array(self.bias, dtype=np.float64, order="C")
        if w.ndim != 2 or b.ndim != 1 or b.shape[0] != w.shape[0]:
            raise InvalidArgument(
                f"head shapes are inconsistent: weights {w.shape}, bias {b.shape}"
            )
        w.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", b)


@dataclass
class RunRecord:
    """Outcome of one (dataset, adapter, seed) run.

    ``accuracy`` is ``None`` unless ``status`` is ``ok``.
    ``encoder_forward_passes`` counts series embedded, one per sample per
    encode call. ``steps_dropped`` is the count of trailing steps a patch
    reducer discarded, 0 otherwise.
    """

    dataset_id: str = ""
    adapter_id: str = ""
    seed: int = 0
    accuracy: float | None = None
    wall_seconds: float = 0.0
    status: str = STATUS_OK
    encoder_forward_passes: int = 0
    steps_dropped: int = 0


def cross_entropy(logits, label: int) -> tuple[float, np.ndarray]:
    """Loss and gradient for one sample, stable under large logits.

    The max is subtracted before exponentiation, so inputs like
    ``[1000, 0]`` stay finite. Returns ``(loss, dloss/dlogits)``.
    """
    z = np.asarray(logits, dtype=np.float64)
    if z.ndim != 1 or z.size < 2:
        raise InvalidArgument(f"logits must be 1-d with at least 2 entries, got shape {z.shape}")
    if not isinstance(label, (int, np.integer)) or isinstance(label, bool):
        raise InvalidArgument(f"label must be an integer, got {label!r}")
    if not (0 <= label < z.size):
        raise InvalidArgument(f"label {label} out of range for {z.size} classes")
    m = z.max()
    e = np.exp(z - m)
    s = e.sum()
    p = e / s
    loss = float(np.log(s) - (z[label] - m))
    grad = p.copy()
    grad[label] -= 1.0
    return loss, grad


def _batch_loss_grad(logits: np.ndarray, onehot: np.ndarray, label_idx: np.ndarray):
    """Mean cross-entropy over rows plus its gradient in one pass."""
    m = logits.max(axis=1, keepdims=True)
    e = np.exp(logits - m)
    s = e.sum(axis=1, keepdims=True)
    picked = np.take_along_axis(logits, label_idx[:, None], axis=1)
    losses = np.log(s) - (picked - m)
    grad = (e / s - onehot) / logits.shape[0]
    return float(losses.mean()), grad


class _Optimizer:
    """In-place SGD or Adam over a list of parameter arrays."""

    def __init__(self, cfg: TrainConfig, params: list[np.ndarray]):
        self.cfg = cfg
        self.params = params
        self.t = 0
        if cfg.optimizer == "adam":
            self.m = [np.zeros_like(p) for p in params]
            self.v = [np.zeros_like(p) for p in params]

    def step(self, grads: list[np.ndarray]) -> None:
        cfg = self.cfg
        self.t += 1
        if cfg.optimizer == "sgd":
            for p, g in zip(self.params, grads):
                p -= cfg.learning_rate * g
            return
        b1t = 1.0 - cfg.beta1 ** self.t
        b2t = 1.0 - cfg.beta2 ** self.t
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            m *= cfg.beta1
            m += (1.0 - cfg.beta1) * g
            v *= cfg.beta2
            v += (1.0 - cfg.beta2) * (g * g)
            p -= cfg.learning_rate * (m / b1t) / (np.sqrt(v / b2t) + cfg.eps)


def _check_labels(labels, n_rows: int, n_classes: int | None) -> tuple[np.ndarray, int]:
    y = np.asarray(labels)
    if y.ndim != 1 or y.shape[0] != n_rows:
        raise InvalidArgument(
            f"labels must be 1-d with one entry per sample ({n_rows}), got shape {y.shape}"
        )
    if not np.issubdtype(y.dtype, np.integer):
        raise InvalidArgument(f"labels must be integers, got dtype {y.dtype}")
    y = y.astype(np.int64)
    if y.min() < 0:
        raise InvalidArgument(f"labels must be non-negative, got minimum {y.min()}")
    if np.unique(y).size < 2:
        raise DegenerateLabels("training labels contain fewer than 2 distinct classes")
    if n_classes is None:
        n_classes = int(y.max()) + 1
    elif y.max() >= n_classes:
        raise InvalidArgument(f"label {y.max()} out of range for n_classes={n_classes}")
    return y, int(n_classes)


def train_head(
    embeddings: np.ndarray,
    labels,
    cfg: TrainConfig,
    n_classes: int | None = None,
) -> tuple[LinearHead, RunRecord]:
    """Fit a zero-initialized softmax head on fixed embeddings.

    Runs ``cfg.epochs`` full-batch steps or stops early with status
    ``budget_exceeded`` when the wall budget is spent (checked between
    epochs, including after the last). With zero logits the initial
    prediction for every sample is class 0.
    """
    emb = np.asarray(embeddings, dtype=np.float64)
    if emb.ndim != 2 or emb.shape[0] < 1:
        raise InvalidArgument(f"embeddings must be 2-d (n, e) with n >= 1, got shape {emb.shape}")
    y, n_classes = _check_labels(labels, emb.shape[0], n_classes)
    start = time.perf_counter()
    w = np.zeros((n_classes, emb.shape[1]))
    b = np.zeros(n_classes)
    onehot = np.zeros((y.size, n_classes))
    onehot[np.arange(y.size), y] = 1.0
    opt = _Optimizer(cfg, [w, b])
    status = STATUS_OK
    for _ in range(cfg.epochs):
        logits = emb @ w.T + b
        _, grad = _batch_loss_grad(logits, onehot, y)
        opt.step([grad.T @ emb, grad.sum(axis=0)])
        if time.perf_counter() - start > cfg.budget_seconds:
            status = STATUS_BUDGET
            break
    record = RunRecord(
        seed=cfg.seed,
        wall_seconds=time.perf_counter() - start,
        status=status,
        encoder_forward_passes=0,
    )
    return LinearHead(weights=w, bias=b), record


def train_lcomb_joint(
    x: SeriesTensor,
    labels,
    enc: SurrogateEncoder,
    adapter: LcombAdapter,
    cfg: TrainConfig,
    n_classes: int | None = None,
) -> tuple[LcombAdapter, LinearHead, RunRecord]:
    """Train combiner logits and head jointly through the frozen encoder.

    Every epoch mixes the channels, encodes the result (``N`` forward
    passes), and backpropagates the head gradient through the encoder into
    the logits. A top-k adapter masks its attention in the forward pass only;
    the logit gradient is taken through the dense softmax.
    """
    if x.n_channels != adapter.d_in:
        raise InvalidArgument(
            f"tensor has {x.n_channels} channels but adapter expects d_in={adapter.d_in}"
        )
    if enc.n_channels != adapter.d_out:
        raise InvalidArgument(
            f"encoder expects {enc.n_channels} channels but adapter outputs d_out={adapter.d_out}"
        )
    y, n_classes = _check_labels(labels, x.n_samples, n_classes)
    start = time.perf_counter()
    logits_param = adapter.logits.copy()
    w = np.zeros((n_classes, enc.embed_dim))
    b = np.zeros(n_classes)
    onehot = np.zeros((y.size, n_classes))
    onehot[np.arange(y.size), y] = 1.0
    opt = _Optimizer(cfg, [logits_param, w, b])
    status = STATUS_OK
    passes = 0
    for _ in range(cfg.epochs):
        current = LcombAdapter(logits=logits_param, k=adapter.k)
        mixed = apply(current, x)
        emb = encode(enc, mixed)
        passes += x.n_samples
        head_logits = emb @ w.T + b
        _, grad = _batch_loss_grad(head_logits, onehot, y)
        grad_emb = grad @ w
        grad_w = grad.T @ emb
        grad_b = grad.sum(axis=0)
        grad_mixed = encode_backward(enc, mixed, grad_emb)
        grad_logits = apply_backward(current, x, grad_mixed)
        opt.step([grad_logits, grad_w, grad_b])
        if time.perf_counter() - start > cfg.budget_seconds:
            status = STATUS_BUDGET
            break
    record = RunRecord(
        seed=cfg.seed,
        wall_seconds=time.perf_counter() - start,
        status=status,
        encoder_forward_passes=passes,
    )
    final = LcombAdapter(logits=logits_param, k=adapter.k)
    return final, LinearHead(weights=w, bias=b), record


def evaluate(head: LinearHead, embeddings: np.ndarray, labels) -> float:
    """Argmax accuracy in [0, 1]; ties resolve to the lowest class index."""
    emb = np.asarray(embeddings, dtype=np.float64)
    if emb.ndim != 2 or emb.shape[0] < 1:
        raise InvalidArgument(f"embeddings must be 2-d (n, e) with n >= 1, got shape {emb.shape}")
    y = np.asarray(labels)
    if y.ndim != 1 or y.shape[0] != emb.shape[0]:
        raise InvalidArgument(
            f"labels must be 1-d with one entry per sample ({emb.shape[0]}), got shape {y.shape}"
        )
    logits = emb @ head.weights.T + head.bias
    pred = np.argmax(logits, axis=1)
    return float(np.mean(pred == y.astype(np.int64)))
