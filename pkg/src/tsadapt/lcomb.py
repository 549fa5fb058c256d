"""Trainable linear channel combiner.

Each output channel is a convex combination of input channels. The mixing
weights are a row-softmax over a logit matrix, optionally sparsified by
keeping only the top ``k`` weights per row and renormalizing them to sum
to one. :func:`apply_backward` gives the exact gradient of the dense
(unmasked) map with respect to the logits; during top-k training the mask
is applied in the forward pass only and gradients flow through the dense
softmax (straight-through).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .tensor import SeriesTensor


@dataclass(frozen=True)
class LcombAdapter:
    """Logit matrix of shape ``(d_out, d_in)`` plus an optional sparsity level.

    ``k`` of ``None`` means dense rows; otherwise each row of the attention
    keeps its ``k`` largest weights. Fresh adapters start from zero logits,
    i.e. uniform attention.
    """

    logits: np.ndarray
    k: int | None = None

    def __post_init__(self):
        logits = np.asarray(self.logits, dtype=np.float64)
        if logits.ndim != 2:
            raise InvalidArgument(f"logits must be 2-d (d_out, d_in), got ndim={logits.ndim}")
        if min(logits.shape) < 1:
            raise InvalidArgument(f"logits dimensions must be positive, got shape {logits.shape}")
        if not np.isfinite(logits).all():
            raise InvalidArgument("logits contain non-finite values")
        if self.k is not None:
            if not isinstance(self.k, (int, np.integer)) or isinstance(self.k, bool):
                raise InvalidArgument(f"k must be an integer or None, got {self.k!r}")
            k = int(self.k)
            if k < 1:
                raise InvalidArgument(f"k must be at least 1, got {k}")
            if k > logits.shape[1]:
                raise InvalidArgument(
                    f"k={k} exceeds the number of input channels d_in={logits.shape[1]}"
                )
            object.__setattr__(self, "k", k)
        logits = np.array(logits, dtype=np.float64, order="C")
        logits.flags.writeable = False
        object.__setattr__(self, "logits", logits)

    @property
    def d_out(self) -> int:
        return self.logits.shape[0]

    @property
    def d_in(self) -> int:
        return self.logits.shape[1]


def new_lcomb(d_in: int, d_out: int, k: int | None = None) -> LcombAdapter:
    """Adapter with zero logits: every output starts as the channel mean."""
    for name, v in (("d_in", d_in), ("d_out", d_out)):
        if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or int(v) < 1:
            raise InvalidArgument(f"{name} must be a positive integer, got {v!r}")
    return LcombAdapter(logits=np.zeros((int(d_out), int(d_in))), k=k)


def _softmax_rows(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def attention(adapter: LcombAdapter) -> np.ndarray:
    """Mixing weights of shape ``(d_out, d_in)``.

    Each row is a softmax over the corresponding logit row; rows sum to one.
    With ``k`` set, entries outside the ``k`` largest per row are zeroed and
    the survivors renormalized. Ties at the cut rank keep the lower channel
    index, matching a stable descending sort.
    """
    a = _softmax_rows(adapter.logits)
    k = adapter.k
    if k is None or k >= adapter.d_in:
        return a
    masked = np.zeros_like(a)
    for i in range(a.shape[0]):
        keep = np.argsort(-a[i], kind="stable")[:k]
        masked[i, keep] = a[i, keep]
    masked /= masked.sum(axis=1, keepdims=True)
    return masked


def apply(adapter: LcombAdapter, x: SeriesTensor) -> SeriesTensor:
    """Mix input channels: output ``(N, T, d_out)`` with ``y = x @ A.T`` per step."""
    if x.n_channels != adapter.d_in:
        raise InvalidArgument(
            f"tensor has {x.n_channels} channels but adapter expects d_in={adapter.d_in}"
        )
    a = attention(adapter)
    return SeriesTensor(x.values @ a.T)


def apply_backward(adapter: LcombAdapter, x: SeriesTensor, grad_y: np.ndarray) -> np.ndarray:
    """Gradient of the dense map's output loss with respect to the logits.

    ``grad_y`` holds dL/dy with shape ``(N, T, d_out)``. The softmax rows are
    independent, so with ``G[o, i] = sum_{n,t} grad_y[n,t,o] * x[n,t,i]`` the
    result is ``A * (G - rowsum(G * A))``. Any top-k mask on the adapter is
    deliberately ignored here; see the module docstring.
    """
    grad_y = np.asarray(grad_y, dtype=np.float64)
    if grad_y.shape != (x.n_samples, x.n_steps, adapter.d_out):
        raise InvalidArgument(
            f"grad_y has shape {grad_y.shape}, expected "
            f"({x.n_samples}, {x.n_steps}, {adapter.d_out})"
        )
    if x.n_channels != adapter.d_in:
        raise InvalidArgument(
            f"tensor has {x.n_channels} channels but adapter expects d_in={adapter.d_in}"
        )
    a = _softmax_rows(adapter.logits)
    g = np.einsum("nto,nti->oi", grad_y, x.values)
    row_dot = (g * a).sum(axis=1, keepdims=True)
    return a * (g - row_dot)
