"""One-axis linear canonical transform.

A single axis carries the kernel

    K_A(x, w) = exp(mu * xi) / sqrt(2 pi |b|),
    xi = (a x^2 - 2 x w + d w^2 - pi/2) / (2 b)

with ``mu`` one of the imaginary units ``mu1, mu2, mu4``. Values in the plane
``span{1, mu}`` are handled as ordinary complex numbers with ``1j`` standing
in for ``mu``; the octonion staging in :mod:`octolct.olct3d` does the
bookkeeping between planes.

Two evaluation routes are provided. :func:`lct1d_direct` is a plain Riemann
sum against the kernel matrix and accepts any output lattice.
:func:`lct1d_chirp_fft` factors the kernel into chirp, centered DFT and chirp,
which only works on the paired lattice of spacing ``2 pi |b| / (n dx)``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .errors import ParameterError, ShapeError
from .octonion import Octonion

DET_TOL = 1e-12
PAIRING_RTOL = 1e-9


def fft_workers() -> int:
    """Thread cap for FFTs, read from ``OCTOLCT_THREADS``."""
    raw = os.environ.get("OCTOLCT_THREADS")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class LCTParams:
    """Unit-determinant matrix ``(a, b; c, d)`` for one axis."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"matrix entry {name}={value} is not finite")
            object.__setattr__(self, name, float(value))
        if abs(self.det - 1.0) > DET_TOL:
            raise ParameterError(f"det(A) must be 1, got {self.det!r}")
        if self.b == 0.0:
            raise ParameterError("kernel is undefined for b == 0")

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "LCTParams":
        return LCTParams(self.d, -self.b, -self.c, self.a)

    def flipped(self) -> "LCTParams":
        """``(a, -b, -c, d)``: negates the kernel phase."""
        return LCTParams(self.a, -self.b, -self.c, self.d)

    @property
    def constant(self) -> float:
        """Kernel modulus ``1 / sqrt(2 pi |b|)``."""
        return 1.0 / math.sqrt(2.0 * math.pi * abs(self.b))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    @classmethod
    def parse(cls, text: str) -> "LCTParams":
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != 4:
            raise ParameterError(f"expected a,b,c,d but got {text!r}")
        try:
            return cls(*(float(p) for p in parts))
        except ValueError as exc:
            raise ParameterError(f"bad matrix {text!r}: {exc}") from None


@dataclass(frozen=True)
class Grid1D:
    """Uniform lattice of ``n`` points with spacing ``step``, centered on 0."""

    n: int
    step: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ShapeError(f"grid size must be a positive integer, got {self.n}")
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ShapeError(f"grid step must be positive, got {self.step}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "step", float(self.step))

    @property
    def offset(self) -> float:
        return -(self.n - 1) / 2 * self.step

    @property
    def coords(self) -> np.ndarray:
        return (np.arange(self.n) - (self.n - 1) / 2) * self.step

    @property
    def has_origin(self) -> bool:
        return self.n % 2 == 1

    def paired(self, A: LCTParams) -> "Grid1D":
        """Output lattice on which the chirp-FFT route is exact."""
        return Grid1D(self.n, 2.0 * math.pi * abs(A.b) / (self.n * self.step))

    @classmethod
    def spanning(cls, n: int, half_width: float) -> "Grid1D":
        """``n`` points from ``-half_width`` to ``+half_width`` inclusive."""
        if n < 2:
            raise ShapeError("need at least two points to span an interval")
        return cls(n, 2.0 * half_width / (n - 1))


def kernel_phase(A: LCTParams, x, w):
    """Kernel phase ``xi`` in radians (broadcasts over ``x`` and ``w``)."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    return (A.a * x * x - 2.0 * x * w + A.d * w * w - math.pi / 2) / (2.0 * A.b)


def kernel_eval(A: LCTParams, x: float, w: float, axis_unit: int) -> Octonion:
    """Kernel value as an octonion in ``span{1, mu_axis_unit}``."""
    if axis_unit not in (1, 2, 4):
        raise ParameterError(f"axis unit must be mu1, mu2 or mu4, got mu{axis_unit}")
    xi = float(kernel_phase(A, x, w))
    c = np.zeros(8)
    c[0] = math.cos(xi)
    c[axis_unit] = math.sin(xi)
    return Octonion(A.constant * c)


def kernel_matrix(A: LCTParams, grid: Grid1D, wgrid: Grid1D) -> np.ndarray:
    """Complex kernel sampled as ``K[x_index, w_index]``."""
    xi = kernel_phase(A, grid.coords[:, None], wgrid.coords[None, :])
    return A.constant * np.exp(1j * xi)


def _check_length(samples: np.ndarray, grid: Grid1D, axis: int) -> None:
    if samples.ndim == 0 or samples.shape[axis] != grid.n:
        raise ShapeError(
            f"samples have {samples.shape[axis] if samples.ndim else 0} points on axis "
            f"{axis}, grid has {grid.n}"
        )


def lct1d_direct(samples, grid: Grid1D, wgrid: Grid1D, A: LCTParams, axis: int = -1) -> np.ndarray:
    """Riemann-sum LCT ``out(w) = sum_x f(x) K(x, w) dx`` along ``axis``."""
    samples = np.asarray(samples)
    _check_length(samples, grid, axis)
    K = kernel_matrix(A, grid, wgrid) * grid.step
    moved = np.moveaxis(samples, axis, -1)
    return np.moveaxis(moved @ K, -1, axis)


def check_paired(grid: Grid1D, wgrid: Grid1D, A: LCTParams) -> None:
    expected = 2.0 * math.pi * abs(A.b) / (grid.n * grid.step)
    if wgrid.n != grid.n or abs(wgrid.step - expected) > PAIRING_RTOL * expected:
        raise ShapeError(
            f"chirp-FFT route needs {grid.n} output points with spacing {expected:.12g}; "
            f"got {wgrid.n} points with spacing {wgrid.step:.12g}"
        )


def _centered_dft(g: np.ndarray, sign: int, workers: int) -> np.ndarray:
    """``G_k = sum_j g_j exp(-sign 2 pi i (j-c)(k-c)/n)``, ``c = (n-1)/2``, last axis."""
    n = g.shape[-1]
    c = (n - 1) / 2
    idx = np.arange(n)
    twiddle = np.exp(sign * 2j * math.pi * c * idx / n)
    g = g * twiddle
    if sign > 0:
        G = scipy.fft.fft(g, axis=-1, workers=workers)
    else:
        G = scipy.fft.ifft(g, axis=-1, workers=workers) * n
    return G * (twiddle * np.exp(-sign * 2j * math.pi * c * c / n))


def lct1d_chirp_fft(samples, grid: Grid1D, wgrid: Grid1D, A: LCTParams, axis: int = -1) -> np.ndarray:
    """Chirp, centered FFT, chirp. Same values as :func:`lct1d_direct` on the paired lattice."""
    samples = np.asarray(samples)
    _check_length(samples, grid, axis)
    check_paired(grid, wgrid, A)
    x = grid.coords
    w = wgrid.coords
    pre = np.exp(1j * A.a * x * x / (2.0 * A.b))
    post = (A.constant * grid.step) * np.exp(1j * (A.d * w * w - math.pi / 2) / (2.0 * A.b))
    moved = np.moveaxis(samples, axis, -1)
    # x_j w_k / b = sgn(b) 2 pi (j-c)(k-c) / n on the paired lattice
    G = _centered_dft(moved * pre, 1 if A.b > 0 else -1, fft_workers())
    return np.moveaxis(G * post, -1, axis)


def lct1d(samples, grid: Grid1D, wgrid: Grid1D, A: LCTParams, axis: int = -1, path: str = "fast"):
    if path == "fast":
        return lct1d_chirp_fft(samples, grid, wgrid, A, axis)
    if path == "direct":
        return lct1d_direct(samples, grid, wgrid, A, axis)
    raise ParameterError(f"unknown path {path!r}; use 'fast' or 'direct'")


def lct1d_inverse(spectrum, wgrid: Grid1D, grid: Grid1D, A: LCTParams, axis: int = -1,
                  path: str = "fast") -> np.ndarray:
    """Apply the kernel of ``A^-1`` from the frequency lattice back to ``grid``."""
    return lct1d(spectrum, wgrid, grid, A.inverse(), axis=axis, path=path)
