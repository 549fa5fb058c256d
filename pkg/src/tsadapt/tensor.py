"""Core tensor type and layout transforms.

A multivariate time series batch is held as a dense float64 array of shape
``(n_samples, n_steps, n_channels)``. Reducers never see that 3-D layout
directly; they operate on 2-D design matrices produced by :func:`flatten_time`
(one row per time step) or :func:`patchify` (one row per window of ``pws``
consecutive steps, time-major within the row). :func:`unpatchify` inverts
the patch layout so projected patches can be re-read as a series tensor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument


def _as_readonly_f64(values, name: str) -> np.ndarray:
    # Always copy: freezing a caller-owned array in place would be a surprise.
    arr = np.array(values, dtype=np.float64, order="C")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SeriesTensor:
    """Immutable batch of equal-length multivariate series.

    ``values`` has shape ``(n_samples, n_steps, n_channels)`` with every
    dimension at least 1 and all entries finite.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = _as_readonly_f64(self.values, "values")
        if arr.ndim != 3:
            raise InvalidArgument(
                f"series tensor must be 3-d (samples, steps, channels), got ndim={arr.ndim}"
            )
        if min(arr.shape) < 1:
            raise InvalidArgument(f"series tensor dimensions must be positive, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise InvalidArgument("series tensor contains non-finite values")
        object.__setattr__(self, "values", arr)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_steps(self) -> int:
        return self.values.shape[1]

    @property
    def n_channels(self) -> int:
        return self.values.shape[2]


@dataclass(frozen=True)
class PatchView:
    """2-D view of a series tensor cut into non-overlapping windows.

    ``rows`` has shape ``(n_samples * n_patches_per_series, patch_window * d)``
    where ``d`` is the per-step width of whatever the rows hold (input
    channels before projection, output channels after). Each row is a window
    flattened time-major: step 0 channels, then step 1 channels, and so on.
    ``truncated_steps`` is the number of steps per series that the view
    covers, ``n_patches_per_series * patch_window``; trailing steps beyond
    that were dropped.
    """

    rows: np.ndarray
    n_patches_per_series: int
    patch_window: int
    truncated_steps: int

    def __post_init__(self):
        rows = _as_readonly_f64(self.rows, "rows")
        if rows.ndim != 2:
            raise InvalidArgument(f"patch rows must be 2-d, got ndim={rows.ndim}")
        if self.n_patches_per_series < 1:
            raise InvalidArgument("n_patches_per_series must be at least 1")
        if self.patch_window < 1:
            raise InvalidArgument("patch_window must be at least 1")
        if self.truncated_steps != self.n_patches_per_series * self.patch_window:
            raise InvalidArgument(
                "truncated_steps must equal n_patches_per_series * patch_window "
                f"({self.n_patches_per_series} * {self.patch_window}), got {self.truncated_steps}"
            )
        if rows.shape[0] % self.n_patches_per_series != 0:
            raise InvalidArgument(
                f"row count {rows.shape[0]} is not a multiple of "
                f"n_patches_per_series={self.n_patches_per_series}"
            )
        if rows.shape[1] % self.patch_window != 0:
            raise InvalidArgument(
                f"row width {rows.shape[1]} is not a multiple of patch_window={self.patch_window}"
            )
        object.__setattr__(self, "rows", rows)


def flatten_time(x: SeriesTensor) -> np.ndarray:
    """Stack all time steps into a design matrix of shape ``(N*T, D)``.

    Row ``i*T + t`` is sample ``i`` at step ``t``; the inverse is a plain
    reshape back to ``(N, T, D)``.
    """
    n, t, d = x.values.shape
    return x.values.reshape(n * t, d)


def patchify(x: SeriesTensor, pws: int) -> PatchView:
    """Cut each series into ``floor(T / pws)`` windows of ``pws`` steps.

    Windows do not overlap and trailing steps that do not fill a window are
    dropped. With ``pws == 1`` the rows coincide with :func:`flatten_time`.
    """
    if not isinstance(pws, (int, np.integer)) or isinstance(pws, bool):
        raise InvalidArgument(f"pws must be an integer, got {pws!r}")
    pws = int(pws)
    if pws < 1:
        raise InvalidArgument(f"pws must be at least 1, got {pws}")
    n, t, d = x.values.shape
    if pws > t:
        raise InvalidArgument(f"pws={pws} exceeds series length T={t}")
    n_patches = t // pws
    used = n_patches * pws
    rows = x.values[:, :used, :].reshape(n * n_patches, pws * d)
    return PatchView(
        rows=rows,
        n_patches_per_series=n_patches,
        patch_window=pws,
        truncated_steps=used,
    )


def unpatchify(view: PatchView, d_out: int) -> SeriesTensor:
    """Reassemble patch rows of width ``patch_window * d_out`` into a tensor.

    The result has shape ``(N, truncated_steps, d_out)``. Applied to an
    unmodified :func:`patchify` result with ``d_out`` equal to the original
    channel count, it reproduces the input tensor (minus truncated steps)
    bit for bit.
    """
    if not isinstance(d_out, (int, np.integer)) or isinstance(d_out, bool):
        raise InvalidArgument(f"d_out must be an integer, got {d_out!r}")
    d_out = int(d_out)
    if d_out < 1:
        raise InvalidArgument(f"d_out must be at least 1, got {d_out}")
    expected = view.patch_window * d_out
    if view.rows.shape[1] != expected:
        raise InvalidArgument(
            f"patch rows have width {view.rows.shape[1]}, expected "
            f"patch_window * d_out = {view.patch_window} * {d_out} = {expected}"
        )
    n = view.rows.shape[0] // view.n_patches_per_series
    values = view.rows.reshape(n, view.truncated_steps, d_out)
    return SeriesTensor(values=values)


def channel_moments(x: SeriesTensor) -> tuple[np.ndarray, np.ndarray]:
    """Per-channel mean and population standard deviation over all samples and steps.

    Both outputs have shape ``(n_channels,)``. The std uses the 1/(N*T)
    normalization, so a constant channel reports exactly 0.
    """
    flat = flatten_time(x)
    return flat.mean(axis=0), flat.std(axis=0)
