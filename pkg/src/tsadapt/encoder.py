"""Frozen random-feature encoder for series embeddings.

The encoder stands in for a large pretrained backbone: weights are drawn
once from a seeded generator and never trained. A series is cut into
overlapping patches (length ``patch_len``, hop ``stride``); each patch is
flattened time-major and concatenated with its per-channel mean and std,
projected, and squashed with tanh; the embedding is the mean token.

Because adapters in front of the encoder are trained by gradient descent,
:func:`encode_backward` implements the exact reverse pass through the token
mean, the tanh projection, and the patch statistics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument
from .tensor import SeriesTensor

# Stabilizer inside the std: std = sqrt(var + VAR_EPS). Keeps the backward
# pass finite on constant patches.
VAR_EPS = 1e-8


@dataclass(frozen=True)
class SurrogateEncoder:
    """Deterministic random encoder for ``n_channels``-channel input.

    The projection has fan-in ``patch_len * n_channels + 2 * n_channels``
    (flattened patch plus per-channel mean and std). Weights and bias are
    drawn as N(0, 1/fan_in) from ``PCG64(seed)``, weights first.
    """

    n_channels: int
    patch_len: int = 8
    stride: int = 4
    embed_dim: int = 128
    seed: int = 0
    proj: np.ndarray = field(init=False, repr=False, compare=False)
    bias: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name, v in (
            ("n_channels", self.n_channels),
            ("patch_len", self.patch_len),
            ("stride", self.stride),
            ("embed_dim", self.embed_dim),
        ):
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or int(v) < 1:
                raise InvalidArgument(f"{name} must be a positive integer, got {v!r}")
        if self.stride > self.patch_len:
            raise InvalidArgument(
                f"stride={self.stride} exceeds patch_len={self.patch_len}; "
                "patches must tile the series without gaps"
            )
        if not isinstance(self.seed, (int, np.integer)) or isinstance(self.seed, bool):
            raise InvalidArgument(f"seed must be an integer, got {self.seed!r}")
        fan_in = self.patch_len * self.n_channels + 2 * self.n_channels
        rng = np.random.default_rng(np.random.PCG64(int(self.seed)))
        std = np.sqrt(1.0 / fan_in)
        proj = rng.normal(0.0, std, size=(self.embed_dim, fan_in))
        bias = rng.normal(0.0, std, size=self.embed_dim)
        proj.flags.writeable = False
        bias.flags.writeable = False
        object.__setattr__(self, "proj", proj)
        object.__setattr__(self, "bias", bias)

    @property
    def fan_in(self) -> int:
        return self.patch_len * self.n_channels + 2 * self.n_channels


def patch_starts(encoder: SurrogateEncoder, n_steps: int) -> np.ndarray:
    """Start offsets 0, stride, 2*stride, ... while a full patch still fits."""
    if n_steps < encoder.patch_len:
        raise InvalidArgument(
            f"series length T={n_steps} is shorter than patch_len={encoder.patch_len}"
        )
    last = n_steps - encoder.patch_len
    return np.arange(0, last + 1, encoder.stride)


def _patch_windows(encoder: SurrogateEncoder, x: SeriesTensor) -> np.ndarray:
    """All patches as an array of shape ``(N, P, patch_len, C)``."""
    starts = patch_starts(encoder, x.n_steps)
    windows = np.lib.stride_tricks.sliding_window_view(
        x.values, encoder.patch_len, axis=1
    )  # (N, T - L + 1, C, L)
    return windows[:, starts].transpose(0, 1, 3, 2)


def _features(encoder: SurrogateEncoder, x: SeriesTensor):
    """Per-patch feature rows ``[vec(patch); mean_c; std_c]`` plus intermediates."""
    w = _patch_windows(encoder, x)  # (N, P, L, C)
    n, p, length, c = w.shape
    mu = w.mean(axis=2)  # (N, P, C)
    var = w.var(axis=2)
    sd = np.sqrt(var + VAR_EPS)
    feats = np.concatenate([w.reshape(n, p, length * c), mu, sd], axis=2)
    return feats, w, mu, sd


def encode(encoder: SurrogateEncoder, x: SeriesTensor) -> np.ndarray:
    """Embed a batch: returns ``(N, embed_dim)`` with entries in (-1, 1).

    One token per patch, ``tanh(proj @ features + bias)``, averaged over the
    patches of each series. Requires ``T >= patch_len``.
    """
    if x.n_channels != encoder.n_channels:
        raise InvalidArgument(
            f"tensor has {x.n_channels} channels but encoder expects {encoder.n_channels}"
        )
    feats, _, _, _ = _features(encoder, x)
    tokens = np.tanh(feats @ encoder.proj.T + encoder.bias)  # (N, P, E)
    return tokens.mean(axis=1)


def encode_backward(encoder: SurrogateEncoder, x: SeriesTensor, grad_emb: np.ndarray) -> np.ndarray:
    """Exact gradient of the embedding with respect to the input values.

    ``grad_emb`` holds dL/d(embedding), shape ``(N, embed_dim)``; the result
    is dL/dx with shape ``(N, T, C)``. Overlapping patches accumulate their
    contributions, and the mean/std feature paths are differentiated through
    the ``VAR_EPS``-stabilized std.
    """
    if x.n_channels != encoder.n_channels:
        raise InvalidArgument(
            f"tensor has {x.n_channels} channels but encoder expects {encoder.n_channels}"
        )
    grad_emb = np.asarray(grad_emb, dtype=np.float64)
    if grad_emb.shape != (x.n_samples, encoder.embed_dim):
        raise InvalidArgument(
            f"grad_emb has shape {grad_emb.shape}, expected "
            f"({x.n_samples}, {encoder.embed_dim})"
        )
    feats, w, mu, sd = _features(encoder, x)
    n, p, length, c = w.shape
    tokens = np.tanh(feats @ encoder.proj.T + encoder.bias)  # (N, P, E)
    # embedding = tokens.mean(axis=1), so each token sees grad_emb / P
    dz = (grad_emb[:, None, :] / p) * (1.0 - tokens * tokens)  # (N, P, E)
    gfeat = dz @ encoder.proj  # (N, P, fan_in)
    gvec = gfeat[:, :, : length * c].reshape(n, p, length, c)
    gmu = gfeat[:, :, length * c : length * c + c]  # (N, P, C)
    gsd = gfeat[:, :, length * c + c :]  # (N, P, C)
    # d mean / d w = 1/L; d std / d w = (w - mu) / (L * std)
    gw = gvec + gmu[:, :, None, :] / length + gsd[:, :, None, :] * (w - mu[:, :, None, :]) / (length * sd[:, :, None, :])
    grad_x = np.zeros((n, x.n_steps, c))
    starts = patch_starts(encoder, x.n_steps)
    for j, st in enumerate(starts):
        grad_x[:, st : st + length, :] += gw[:, j]
    return grad_x
