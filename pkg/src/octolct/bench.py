"""Timing of the fast and direct evaluation routes.

Every speed figure is paired with an agreement check between the two routes
on the same input, so a fast-but-wrong path cannot report a win.
"""

from __future__ import annotations

import platform
import statistics
import time
from typing import Callable

import numpy as np

from .io import generate
from .lct1d import Grid1D, LCTParams, lct1d_chirp_fft, lct1d_direct
from .olct3d import olct_direct_at, olct_separable

DEFAULT_PARAMS = (
    LCTParams(0.8, 1.2, (0.8 * 0.6 - 1.0) / 1.2, 0.6),
    LCTParams(1.1, -0.7, (1.1 * 0.9 - 1.0) / -0.7, 0.9),
    LCTParams(-0.4, 1.6, (-0.4 * 1.3 - 1.0) / 1.6, 1.3),
)


def median_time(fn: Callable[[], object], repeats: int = 5) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def _rel(a, b) -> float:
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)) / np.linalg.norm(b))


def bench_1d(n: int = 4096, repeats: int = 5, seed: int = 0) -> dict:
    """Direct matrix sum versus chirp-FFT for one axis of length ``n``."""
    A = DEFAULT_PARAMS[0]
    grid = Grid1D(n, 8.0 / n**0.5)
    wgrid = grid.paired(A)
    x = np.random.default_rng(seed).standard_normal(n)
    fast = lct1d_chirp_fft(x, grid, wgrid, A)
    direct = lct1d_direct(x, grid, wgrid, A)
    t_direct = median_time(lambda: lct1d_direct(x, grid, wgrid, A), repeats)
    t_fast = median_time(lambda: lct1d_chirp_fft(x, grid, wgrid, A), repeats)
    return {"n": n, "direct_s": t_direct, "fast_s": t_fast, "speedup": t_direct / t_fast,
            "agreement": _rel(fast, direct)}


def bench_3d(n: int = 64, repeats: int = 5, probe_points: int = 4, seed: int = 0) -> dict:
    """Staged fast OLCT on an ``n^3`` Gaussian, with a direct-sum estimate.

    The direct sum is evaluated at ``probe_points`` random output points and
    its full cost is extrapolated linearly from the per-point time.
    """
    grids = (Grid1D(n, 8.0 / n**0.5),) * 3
    f = generate("gaussian", grids, {"sigma": 1.0})
    A = DEFAULT_PARAMS
    F = olct_separable(f, A)
    t_fast = median_time(lambda: olct_separable(f, A), repeats)
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, n, size=(probe_points, 3))
    t0 = time.perf_counter()
    probe = olct_direct_at(f, A, idx)
    per_point = (time.perf_counter() - t0) / probe_points
    fast_at = F.samples[idx[:, 0], idx[:, 1], idx[:, 2]]
    t_direct = per_point * n**3
    return {"n": n, "fast_s": t_fast, "direct_s_extrapolated": t_direct,
            "speedup_extrapolated": t_direct / t_fast, "probe_points": probe_points,
            "agreement": _rel(fast_at, probe)}


def run_all(n1d: int = 4096, n3d: int = 64, repeats: int = 5) -> dict:
    return {
        "machine": {"python": platform.python_version(), "platform": platform.platform(),
                    "numpy": np.__version__},
        "lct1d": bench_1d(n1d, repeats),
        "olct3d": bench_3d(n3d, repeats),
    }
