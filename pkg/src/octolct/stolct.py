"""Short-time octonion LCT.

For a real signal ``f`` and a real window ``phi`` the transform at window
shift ``u`` is the OLCT of the windowed product ``h(x, u) = f(x) phi(x - u)``.
Shifts live on a sub-lattice of the signal grid (integer multiples of the
sample spacing), and the window is zero outside its sampled support.

:class:`StolctField` stores values with the shift axes first:
``samples[u1, u2, u3, w1, w2, w3, :]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import ParameterError, ResourceError, ShapeError
from .lct1d import Grid1D, LCTParams, kernel_matrix
from .octonion import embed_plane, norm_array, quat_mul_array
from .olct3d import (
    ParityOctet,
    RealField3D,
    _as_params,
    _direct_sum,
    _forward_staged,
    _inverse_staged,
    _lct3d_complex,
    _parity_integrals,
    combine_four,
    imaginary_residual,
    paired_grids,
)

Grids3 = Sequence[Grid1D]

# Values per chunk of window shifts pushed through the staged transform at once.
CHUNK_VALUES = 4_000_000


@dataclass(frozen=True)
class Window3D:
    """Real window sampled on the same grids as the signals it is applied to."""

    samples: np.ndarray
    grids: tuple[Grid1D, Grid1D, Grid1D]

    def __post_init__(self):
        field = RealField3D(self.samples, self.grids)
        object.__setattr__(self, "samples", field.samples)
        object.__setattr__(self, "grids", field.grids)
        if not np.any(field.samples):
            raise ParameterError("window must not vanish identically")

    @classmethod
    def from_field(cls, f: RealField3D) -> "Window3D":
        return cls(f.samples, f.grids)

    @property
    def cell_volume(self) -> float:
        return float(np.prod([g.step for g in self.grids]))

    @cached_property
    def norm_sq(self) -> float:
        return float(np.sum(self.samples**2) * self.cell_volume)

    def as_field(self) -> RealField3D:
        return RealField3D(self.samples, self.grids)


@dataclass(frozen=True)
class StolctField:
    samples: np.ndarray
    wgrids: tuple[Grid1D, Grid1D, Grid1D]
    ugrids: tuple[Grid1D, Grid1D, Grid1D]

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        expect = tuple(g.n for g in self.ugrids) + tuple(g.n for g in self.wgrids) + (8,)
        if s.shape != expect:
            raise ShapeError(f"samples {s.shape} do not match lattices {expect}")
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "wgrids", tuple(self.wgrids))
        object.__setattr__(self, "ugrids", tuple(self.ugrids))

    @property
    def cell_volume(self) -> float:
        """Volume of one ``(w, u)`` cell."""
        return float(np.prod([g.step for g in self.wgrids]) * np.prod([g.step for g in self.ugrids]))

    def magnitude(self) -> np.ndarray:
        return norm_array(self.samples)

    def at_u(self, index: tuple[int, int, int]) -> np.ndarray:
        return self.samples[index]


# ---------------------------------------------------------------------------
# shift lattices


def _shift_indices(grid: Grid1D, ugrid: Grid1D) -> np.ndarray:
    """Integer sample offsets of every shift in ``ugrid`` relative to ``grid``."""
    t = ugrid.coords / grid.step
    ti = np.rint(t)
    if np.max(np.abs(t - ti)) > 1e-9:
        raise ShapeError("shift lattice points must fall on the signal lattice")
    return ti.astype(int)


def shift_lattice(grids: Grids3, stride: int | Sequence[int] = 1) -> tuple[Grid1D, Grid1D, Grid1D]:
    """Centered shift lattices with the given stride in samples (1 = every sample)."""
    strides = (stride,) * 3 if isinstance(stride, int) else tuple(stride)
    out = []
    for g, s in zip(grids, strides):
        if s < 1:
            raise ParameterError("stride must be a positive integer")
        n_u = (g.n - 1) // s + 1
        while n_u > 1:
            candidate = Grid1D(n_u, g.step * s)
            t = candidate.coords / g.step
            if np.allclose(t, np.rint(t), atol=1e-9):
                break
            n_u -= 1
        out.append(Grid1D(n_u, g.step * s))
    return tuple(out)  # type: ignore[return-value]


def _validate_ugrids(grids: Grids3, ugrids: Grids3 | None) -> tuple[Grid1D, Grid1D, Grid1D]:
    if ugrids is None:
        return shift_lattice(grids, 1)
    ugrids = tuple(ugrids)
    if len(ugrids) != 3:
        raise ShapeError("need three shift grids")
    if any(g.n == 0 for g in ugrids):
        raise ShapeError("empty shift lattice")
    for g, ug in zip(grids, ugrids):
        _shift_indices(g, ug)
    return ugrids  # type: ignore[return-value]


def shifted_window(window: Window3D, ugrids: Grids3, u_slice: slice | None = None) -> np.ndarray:
    """``phi(x - u)`` for every shift: shape ``(U1, U2, U3, n1, n2, n3)``.

    With ``u_slice`` only that range of flattened shift indices is built and
    the result has shape ``(len, n1, n2, n3)``.
    """
    grids = window.grids
    idx = []
    valid = []
    for k in range(3):
        t = _shift_indices(grids[k], ugrids[k])
        src = np.arange(grids[k].n)[None, :] - t[:, None]
        valid.append((src >= 0) & (src < grids[k].n))
        idx.append(np.clip(src, 0, grids[k].n - 1))
    U = tuple(g.n for g in ugrids)
    if u_slice is None:
        i1 = idx[0][:, None, None, :, None, None]
        i2 = idx[1][None, :, None, None, :, None]
        i3 = idx[2][None, None, :, None, None, :]
        m = (valid[0][:, None, None, :, None, None] & valid[1][None, :, None, None, :, None]
             & valid[2][None, None, :, None, None, :])
        return np.where(m, window.samples[i1, i2, i3], 0.0)
    flat = np.arange(int(np.prod(U)))[u_slice]
    a, b, c = np.unravel_index(flat, U)
    i1 = idx[0][a][:, :, None, None]
    i2 = idx[1][b][:, None, :, None]
    i3 = idx[2][c][:, None, None, :]
    m = valid[0][a][:, :, None, None] & valid[1][b][:, None, :, None] & valid[2][c][:, None, None, :]
    return np.where(m, window.samples[i1, i2, i3], 0.0)


def windowed_product(f: RealField3D, window: Window3D, ugrids: Grids3 | None = None) -> np.ndarray:
    """``h(x, u) = f(x) phi(x - u)`` with shape ``(U1, U2, U3, n1, n2, n3)``."""
    _check_pair(f, window)
    ugrids = _validate_ugrids(f.grids, ugrids)
    return shifted_window(window, ugrids) * f.samples


def _check_pair(f: RealField3D, window: Window3D) -> None:
    if not isinstance(window, Window3D):
        raise ParameterError("window must be a Window3D")
    if tuple(f.grids) != tuple(window.grids):
        raise ShapeError("signal and window must share the same grids")


def _u_chunks(n_u: int, per_u: int):
    size = max(1, CHUNK_VALUES // max(per_u, 1))
    for start in range(0, n_u, size):
        yield slice(start, min(n_u, start + size))


# ---------------------------------------------------------------------------
# forward transforms


def stolct_forward(f: RealField3D, window: Window3D, A, ugrids: Grids3 | None = None,
                   wgrids: Grids3 | None = None) -> StolctField:
    """Windowed transform evaluated straight from its defining sum.

    For every shift the sum ``sum_x f(x) phi(x - u) K1 K2 K3 dx`` runs over
    the full left-to-right kernel product. Cost grows with the square of the
    lattice size, so this is the reference route for small grids.
    """
    A = _as_params(A)
    _check_pair(f, window)
    ugrids = _validate_ugrids(f.grids, ugrids)
    wgrids = paired_grids(f.grids, A) if wgrids is None else tuple(wgrids)
    h = shifted_window(window, ugrids) * f.samples
    return StolctField(_direct_sum(h, f.grids, wgrids, A), wgrids, ugrids)


def stolct_via_olct(f: RealField3D, window: Window3D, A, ugrids: Grids3 | None = None,
                    path: str = "fast") -> StolctField:
    """Two steps: window the signal, then take the staged OLCT of each slice."""
    A = _as_params(A)
    _check_pair(f, window)
    ugrids = _validate_ugrids(f.grids, ugrids)
    wgrids = paired_grids(f.grids, A)
    U = tuple(g.n for g in ugrids)
    n_u = int(np.prod(U))
    out = np.empty((n_u,) + tuple(g.n for g in wgrids) + (8,))
    for sl in _u_chunks(n_u, f.samples.size * 8):
        h = shifted_window(window, ugrids, sl) * f.samples
        out[sl] = _forward_staged(h, f.grids, wgrids, A, path)
    return StolctField(out.reshape(U + out.shape[1:]), wgrids, ugrids)


def stolct(f: RealField3D, window: Window3D, A, ugrids: Grids3 | None = None,
           path: str = "fast") -> StolctField:
    if path == "direct":
        return stolct_forward(f, window, A, ugrids)
    return stolct_via_olct(f, window, A, ugrids, path=path)


def _covers(grid: Grid1D, ugrid: Grid1D) -> bool:
    # even lattices have no shift at the outermost half-sample positions
    return ugrid.coords[0] - grid.coords[0] <= (0.5 + 1e-9) * grid.step


def stolct_reconstruct(G: StolctField, window: Window3D, A, path: str = "fast",
                       return_residual: bool = False):
    """Recover the signal from its short-time transform.

    Each shift slice is inverted with the kernels of ``A3^-1, A2^-1, A1^-1``,
    multiplied on the right by ``phi(x - u)``, summed over the shift lattice
    and divided by ``||phi||^2``. The shift lattice must reach both ends of
    the signal grid on every axis.
    """
    A = _as_params(A)
    if not isinstance(window, Window3D):
        raise ParameterError("window must be a Window3D")
    grids = window.grids
    for g, ug in zip(grids, G.ugrids):
        if not _covers(g, ug):
            raise ParameterError("reconstruction needs a shift lattice covering the signal support")
    U = tuple(g.n for g in G.ugrids)
    n_u = int(np.prod(U))
    du = float(np.prod([g.step for g in G.ugrids]))
    flat = G.samples.reshape((n_u,) + G.samples.shape[3:])
    acc = np.zeros(tuple(g.n for g in grids) + (8,))
    for sl in _u_chunks(n_u, int(np.prod([g.n for g in grids])) * 8):
        h = _inverse_staged(flat[sl], G.wgrids, grids, A, path)
        phi = shifted_window(window, G.ugrids, sl)
        acc += np.einsum("uabck,uabc->abck", h, phi)
    acc *= du / window.norm_sq
    result = RealField3D(acc[..., 0], grids)
    if return_residual:
        return result, imaginary_residual(acc)
    return result


def stolct_parity_components(f: RealField3D, window: Window3D, A, ugrids: Grids3 | None = None) -> ParityOctet:
    """Eight real parity components over ``(u, w)``, shape ``(8, U1, U2, U3, W1, W2, W3)``.

    Every slice ``h(., u)`` is split into parity parts about the grid origin;
    see :class:`octolct.olct3d.ParityOctet` for ``components`` vs ``matched``.
    """
    A = _as_params(A)
    _check_pair(f, window)
    ugrids = _validate_ugrids(f.grids, ugrids)
    wgrids = paired_grids(f.grids, A)
    h = shifted_window(window, ugrids) * f.samples
    table = _parity_integrals(h, f.grids, wgrids, A)
    return ParityOctet(table.sum(axis=0), np.array([table[i, i] for i in range(8)]), wgrids)


def windowed_at_shifts(f: RealField3D, window: Window3D, shifts) -> np.ndarray:
    """``f(x) phi(x - t dx)`` for integer sample shifts ``t`` of shape ``(S, 3)``.

    Shifts may reach past the signal lattice; the window then overlaps
    partially or not at all. Returns shape ``(S, n1, n2, n3)``.
    """
    _check_pair(f, window)
    shifts = np.asarray(shifts, dtype=int).reshape(-1, 3)
    n = [g.n for g in f.grids]
    h = np.zeros((len(shifts),) + f.samples.shape)
    for s, t in enumerate(shifts):
        src = [np.arange(n[k]) - t[k] for k in range(3)]
        ok = [(x >= 0) & (x < n[k]) for k, x in enumerate(src)]
        if not all(o.any() for o in ok):
            continue
        block = window.samples[np.ix_(*[np.clip(src[k], 0, n[k] - 1) for k in range(3)])]
        mask = ok[0][:, None, None] & ok[1][None, :, None] & ok[2][None, None, :]
        h[s] = np.where(mask, block, 0.0) * f.samples
    return h


def stolct_at_shifts(f: RealField3D, window: Window3D, A, shifts, path: str = "fast") -> np.ndarray:
    """Transform values at integer sample shifts, shape ``(S, W1, W2, W3, 8)``."""
    A = _as_params(A)
    h = windowed_at_shifts(f, window, shifts)
    return _forward_staged(h, f.grids, paired_grids(f.grids, A), A, path)


def stolct_matched_parity_at(f: RealField3D, window: Window3D, A, shifts) -> np.ndarray:
    """Matched-parity components at integer sample shifts, shape ``(8, S, W1, W2, W3)``."""
    A = _as_params(A)
    h = windowed_at_shifts(f, window, shifts)
    table = _parity_integrals(h, f.grids, paired_grids(f.grids, A), A)
    return np.array([table[i, i] for i in range(8)])


# ---------------------------------------------------------------------------
# single-unit short-time LCT


def stlct3d(f: RealField3D, window: Window3D, A, ugrids: Grids3 | None = None,
            path: str = "fast") -> StolctField:
    """Short-time 3D LCT with the shared unit ``mu1``; values in ``span{1, mu1}``."""
    A = _as_params(A)
    _check_pair(f, window)
    ugrids = _validate_ugrids(f.grids, ugrids)
    wgrids = paired_grids(f.grids, A)
    h = shifted_window(window, ugrids) * f.samples
    z = _lct3d_complex(h, f.grids, wgrids, A, path)
    return StolctField(embed_plane(z, 1), wgrids, ugrids)


def stolct_from_stlct3d(f: RealField3D, window: Window3D, A, ugrids: Grids3 | None = None,
                        path: str = "fast", printed_sign: bool = False) -> StolctField:
    """Short-time OLCT assembled from four short-time 3D LCTs (see :func:`combine_four`)."""
    A1, A2, A3 = _as_params(A)

    def run(p2: LCTParams, p3: LCTParams) -> StolctField:
        return stlct3d(f, window, (A1, p2, p3), ugrids, path)

    pp = run(A2, A3)
    L = combine_four(pp.samples, run(A2, A3.flipped()).samples, run(A2.flipped(), A3).samples,
                     run(A2.flipped(), A3.flipped()).samples, printed_sign)
    return StolctField(L, pp.wgrids, pp.ugrids)


# ---------------------------------------------------------------------------
# two-axis quaternion variant


def qstlct_2d(f2: np.ndarray, phi2: np.ndarray, A1: LCTParams, A2: LCTParams,
              grids2: Sequence[Grid1D], ugrids2: Sequence[Grid1D] | None = None) -> np.ndarray:
    """Quaternion short-time LCT of a 2D signal with a real 2D window.

    ``f2`` is real ``(n1, n2)`` or quaternion ``(n1, n2, 4)``. Returns
    quaternion values ``(U1, U2, W1, W2, 4)`` of
    ``sum_x ((f(x) phi(x - u)) K1(x1, w1)) K2(x2, w2) dx`` on the paired
    frequency lattice, evaluated directly with Hamilton products.
    """
    grids2 = tuple(grids2)
    if len(grids2) != 2:
        raise ShapeError("need two grids")
    f2 = np.asarray(f2, dtype=float)
    if f2.ndim == 2:
        fq = np.zeros(f2.shape + (4,))
        fq[..., 0] = f2
    else:
        fq = f2
    n = tuple(g.n for g in grids2)
    if fq.shape != n + (4,) or np.shape(phi2) != n:
        raise ShapeError("signal and window must match the 2D grids")
    phi2 = np.asarray(phi2, dtype=float)
    if not np.any(phi2):
        raise ParameterError("window must not vanish identically")
    ugrids2 = tuple(shift_lattice(grids2 + (Grid1D(1, 1.0),), 1)[:2]) if ugrids2 is None else tuple(ugrids2)
    if n[0] * n[1] > 41**2:
        raise ResourceError("direct 2D sum limited to 41x41 grids")
    wgrids2 = (grids2[0].paired(A1), grids2[1].paired(A2))
    K = []
    for k, (p, unit) in enumerate(((A1, 1), (A2, 2))):
        z = kernel_matrix(p, grids2[k], wgrids2[k])
        q = np.zeros(z.shape + (4,))
        q[..., 0] = z.real
        q[..., unit] = z.imag
        K.append(q)
    # K1 K2 for every (x1, x2, w1, w2)
    K12 = quat_mul_array(K[0][:, None, :, None, :], K[1][None, :, None, :, :])
    t = [_shift_indices(grids2[k], ugrids2[k]) for k in range(2)]
    dvol = grids2[0].step * grids2[1].step
    out = np.zeros((ugrids2[0].n, ugrids2[1].n, wgrids2[0].n, wgrids2[1].n, 4))
    for a, ta in enumerate(t[0]):
        for b, tb in enumerate(t[1]):
            phi = np.zeros(n)
            s1 = np.arange(n[0]) - ta
            s2 = np.arange(n[1]) - tb
            ok1 = (s1 >= 0) & (s1 < n[0])
            ok2 = (s2 >= 0) & (s2 < n[1])
            phi[np.ix_(ok1, ok2)] = phi2[np.ix_(s1[ok1], s2[ok2])]
            h = fq * phi[..., None]
            prod = quat_mul_array(h[:, :, None, None, :], K12)
            out[a, b] = prod.sum(axis=(0, 1)) * dvol
    return out

