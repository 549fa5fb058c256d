"""Shared helpers for the test suite."""

import numpy as np
import pytest

from tsadapt import SeriesTensor


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.PCG64(seed))


def random_tensor(rng: np.random.Generator, n: int, t: int, d: int, scale: float = 1.0) -> SeriesTensor:
    return SeriesTensor(rng.normal(0.0, scale, size=(n, t, d)))


def assert_grad_close(analytic, numeric, tol=1e-4, floor=0.01):
    """Elementwise |a - b| <= tol * max(|a|, |b|, floor)."""
    analytic = np.asarray(analytic, dtype=float)
    numeric = np.asarray(numeric, dtype=float)
    assert analytic.shape == numeric.shape
    bound = tol * np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    diff = np.abs(analytic - numeric)
    worst = np.unravel_index(np.argmax(diff - bound), diff.shape)
    assert np.all(diff <= bound), (
        f"gradient mismatch at {worst}: analytic={analytic[worst]!r} "
        f"numeric={numeric[worst]!r} diff={diff[worst]:.3e} bound={bound[worst]:.3e}"
    )


def central_diff(f, x: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """Central finite differences of a scalar function over every entry of x."""
    x = np.asarray(x, dtype=float)
    grad = np.zeros_like(x)
    flat = grad.reshape(-1)
    xf = x.reshape(-1)
    for i in range(xf.size):
        orig = xf[i]
        xf[i] = orig + step
        hi = f(x)
        xf[i] = orig - step
        lo = f(x)
        xf[i] = orig
        flat[i] = (hi - lo) / (2.0 * step)
    return grad


@pytest.fixture
def rng():
    return make_rng(0)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance-gate verdict lines after the test summary."""
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None) if mod else None
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
