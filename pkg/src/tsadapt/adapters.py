"""Unsupervised channel reducers.

Four families share one record type and one transform path:

* ``pca`` -- principal components of the centered (optionally standardized)
  design matrix, computed by singular value decomposition. With ``pws > 1``
  the design matrix holds patches of ``pws`` consecutive steps, the
  projection keeps ``pws * d_prime`` patch components, and the result is
  read back as a series with ``d_prime`` channels. ``pws = 1`` is standard
  per-step PCA.
* ``svd`` -- the same decomposition without centering, i.e. directions of
  maximal raw second moment.
* ``rand_proj`` -- a seeded Gaussian random projection with entry variance
  ``1/d_prime``, so squared norms are preserved in expectation.
* ``var_select`` -- keeps the ``d_prime`` channels with the largest
  population variance; rows of ``w`` are one-hot.

Every fit returns a :class:`ChannelReducer` and every reducer is applied
through :func:`transform`, which computes ``(rows - center) / scale @ w.T``
on the design matrix the reducer was fit for.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, UnderdeterminedFit
from .tensor import PatchView, SeriesTensor, channel_moments, flatten_time, patchify, unpatchify

REDUCER_KINDS = ("pca", "svd", "rand_proj", "var_select")

# Floor applied to per-column std before dividing, so constant columns pass
# through centered but unscaled instead of producing NaN.
SCALE_FLOOR = 1e-12


@dataclass(frozen=True)
class ChannelReducer:
    """A fitted linear map from input channels (or patches) to output channels.

    ``w`` has shape ``(d_eff_out, d_eff_in)`` where the effective widths are
    ``pws * d_out`` and ``pws * d_in``; with ``pws = 1`` that is simply
    ``(d_out, d_in)``. ``center`` and ``scale`` have length ``d_eff_in`` and
    are applied columnwise before projection. ``truncated_steps`` records how
    many steps per series the fit design matrix covered.
    ``explained_variance_ratio`` is populated for ``pca`` and ``svd`` only.
    """

    kind: str
    w: np.ndarray
    center: np.ndarray
    scale: np.ndarray
    pws: int
    d_in: int
    d_out: int
    truncated_steps: int
    seed: int | None = None
    explained_variance_ratio: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in REDUCER_KINDS:
            raise InvalidArgument(f"unknown reducer kind {self.kind!r}")
        w = np.asarray(self.w, dtype=np.float64)
        center = np.asarray(self.center, dtype=np.float64)
        scale = np.asarray(self.scale, dtype=np.float64)
        d_eff_in = self.pws * self.d_in
        d_eff_out = self.pws * self.d_out
        if w.shape != (d_eff_out, d_eff_in):
            raise InvalidArgument(
                f"w has shape {w.shape}, expected ({d_eff_out}, {d_eff_in}) "
                f"for pws={self.pws}, d_in={self.d_in}, d_out={self.d_out}"
            )
        if center.shape != (d_eff_in,) or scale.shape != (d_eff_in,):
            raise InvalidArgument(
                f"center/scale must have shape ({d_eff_in},), got {center.shape} and {scale.shape}"
            )
        if np.any(scale <= 0):
            raise InvalidArgument("scale entries must be positive")
        evr = self.explained_variance_ratio
        if evr is not None:
            evr = np.asarray(evr, dtype=np.float64)
            if evr.shape != (d_eff_out,):
                raise InvalidArgument(
                    f"explained_variance_ratio must have shape ({d_eff_out},), got {evr.shape}"
                )
            evr = np.array(evr, dtype=np.float64, order="C")
            evr.flags.writeable = False
        for name, arr in (("w", w), ("center", center), ("scale", scale)):
            if not np.isfinite(arr).all():
                raise InvalidArgument(f"reducer {name} contains non-finite values")
        w = np.array(w, dtype=np.float64, order="C")
        center = np.array(center, dtype=np.float64, order="C")
        scale = np.array(scale, dtype=np.float64, order="C")
        w.flags.writeable = False
        center.flags.writeable = False
        scale.flags.writeable = False
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "explained_variance_ratio", evr)


def _check_fit_args(x: SeriesTensor, d_prime: int, pws: int = 1) -> int:
    if not isinstance(d_prime, (int, np.integer)) or isinstance(d_prime, bool):
        raise InvalidArgument(f"d_prime must be an integer, got {d_prime!r}")
    d_prime = int(d_prime)
    if d_prime < 1:
        raise InvalidArgument(f"d_prime must be at least 1, got {d_prime}")
    if d_prime > x.n_channels:
        raise InvalidArgument(
            f"d_prime={d_prime} exceeds the number of input channels D={x.n_channels}"
        )
    if not isinstance(pws, (int, np.integer)) or isinstance(pws, bool):
        raise InvalidArgument(f"pws must be an integer, got {pws!r}")
    if pws < 1:
        raise InvalidArgument(f"pws must be at least 1, got {pws}")
    if pws > x.n_steps:
        raise InvalidArgument(f"pws={pws} exceeds series length T={x.n_steps}")
    return d_prime


def _design_matrix(x: SeriesTensor, pws: int) -> tuple[np.ndarray, int]:
    """Design matrix for a fit, plus the number of steps per series it covers."""
    if pws == 1:
        return flatten_time(x), x.n_steps
    view = patchify(x, pws)
    return view.rows, view.truncated_steps


def _principal_rows(z: np.ndarray, d_eff: int) -> tuple[np.ndarray, np.ndarray]:
    """Top ``d_eff`` right singular vectors of ``z`` as rows, plus variance ratios.

    Rows are sign-fixed so the largest-magnitude entry of each is
    non-negative. When ``d_eff`` exceeds ``min(z.shape)`` the full
    decomposition is used so the returned rows stay orthonormal; the extra
    components carry zero explained variance.
    """
    full = d_eff > min(z.shape)
    _, s, vt = np.linalg.svd(z, full_matrices=full)
    w = vt[:d_eff].copy()
    for i in range(w.shape[0]):
        j = int(np.argmax(np.abs(w[i])))
        if w[i, j] < 0:
            w[i] = -w[i]
    total = float(np.sum(s * s))
    ratios = np.zeros(d_eff)
    if total > 0.0:
        m = min(d_eff, s.size)
        ratios[:m] = (s[:m] * s[:m]) / total
    return w, ratios


def fit_pca(x: SeriesTensor, d_prime: int, *, scaled: bool = False, pws: int = 1) -> ChannelReducer:
    """Fit principal components on the (optionally standardized) design matrix.

    Centering always happens; with ``scaled=True`` each design column is also
    divided by its population std, floored at ``SCALE_FLOOR``. With
    ``pws > 1`` the components live in patch space: ``w`` maps a flattened
    ``pws``-step window of ``d_in`` channels to a window of ``d_prime``
    reduced channels.
    """
    d_prime = _check_fit_args(x, d_prime, pws)
    pws = int(pws)
    design, used = _design_matrix(x, pws)
    if design.shape[0] < 2:
        raise UnderdeterminedFit(
            f"pca needs at least 2 design rows, got {design.shape[0]}"
        )
    center = design.mean(axis=0)
    if scaled:
        scale = np.maximum(design.std(axis=0), SCALE_FLOOR)
    else:
        scale = np.ones_like(center)
    z = (design - center) / scale
    w, ratios = _principal_rows(z, pws * d_prime)
    return ChannelReducer(
        kind="pca",
        w=w,
        center=center,
        scale=scale,
        pws=pws,
        d_in=x.n_channels,
        d_out=d_prime,
        truncated_steps=used,
        explained_variance_ratio=ratios,
    )


def fit_truncated_svd(x: SeriesTensor, d_prime: int) -> ChannelReducer:
    """Fit the top right singular vectors of the raw (uncentered) step matrix."""
    d_prime = _check_fit_args(x, d_prime)
    design, used = _design_matrix(x, 1)
    if design.shape[0] < 2:
        raise UnderdeterminedFit(
            f"truncated svd needs at least 2 design rows, got {design.shape[0]}"
        )
    w, ratios = _principal_rows(design, d_prime)
    return ChannelReducer(
        kind="svd",
        w=w,
        center=np.zeros(x.n_channels),
        scale=np.ones(x.n_channels),
        pws=1,
        d_in=x.n_channels,
        d_out=d_prime,
        truncated_steps=used,
        explained_variance_ratio=ratios,
    )


def fit_random_projection(x: SeriesTensor, d_prime: int, seed: int) -> ChannelReducer:
    """Draw a Gaussian projection with entries ~ N(0, 1/d_prime).

    The matrix depends only on ``(d_prime, D, seed)``; the data enters just
    through its shape. Entry variance 1/d_prime makes the projection
    norm-preserving in expectation, the usual Johnson-Lindenstrauss scaling.
    """
    d_prime = _check_fit_args(x, d_prime)
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise InvalidArgument(f"seed must be an integer, got {seed!r}")
    rng = np.random.default_rng(np.random.PCG64(int(seed)))
    w = rng.normal(0.0, np.sqrt(1.0 / d_prime), size=(d_prime, x.n_channels))
    return ChannelReducer(
        kind="rand_proj",
        w=w,
        center=np.zeros(x.n_channels),
        scale=np.ones(x.n_channels),
        pws=1,
        d_in=x.n_channels,
        d_out=d_prime,
        truncated_steps=x.n_steps,
        seed=int(seed),
    )


def fit_variance_selection(x: SeriesTensor, d_prime: int) -> ChannelReducer:
    """Keep the ``d_prime`` highest-variance channels.

    Ties break toward the lower channel index, so equal-variance inputs keep
    channels ``0..d_prime-1``. Each row of ``w`` is one-hot and the selected
    channels pass through unchanged.
    """
    d_prime = _check_fit_args(x, d_prime)
    _, std = channel_moments(x)
    order = np.argsort(-(std * std), kind="stable")[:d_prime]
    w = np.zeros((d_prime, x.n_channels))
    w[np.arange(d_prime), order] = 1.0
    return ChannelReducer(
        kind="var_select",
        w=w,
        center=np.zeros(x.n_channels),
        scale=np.ones(x.n_channels),
        pws=1,
        d_in=x.n_channels,
        d_out=d_prime,
        truncated_steps=x.n_steps,
    )


def transform(reducer: ChannelReducer, x: SeriesTensor) -> SeriesTensor:
    """Apply a fitted reducer to a series tensor.

    With ``pws = 1`` the output keeps every step: shape ``(N, T, d_out)``.
    With ``pws > 1`` the series is cut into windows exactly as during the
    fit, each window is projected, and the result is read back as
    ``(N, floor(T/pws)*pws, d_out)``.
    """
    if x.n_channels != reducer.d_in:
        raise InvalidArgument(
            f"tensor has {x.n_channels} channels but reducer was fit for d_in={reducer.d_in}"
        )
    if reducer.pws == 1:
        rows = flatten_time(x)
        projected = ((rows - reducer.center) / reducer.scale) @ reducer.w.T
        return SeriesTensor(projected.reshape(x.n_samples, x.n_steps, reducer.d_out))
    view = patchify(x, reducer.pws)
    projected = ((view.rows - reducer.center) / reducer.scale) @ reducer.w.T
    out_view = PatchView(
        rows=projected,
        n_patches_per_series=view.n_patches_per_series,
        patch_window=view.patch_window,
        truncated_steps=view.truncated_steps,
    )
    return unpatchify(out_view, reducer.d_out)
