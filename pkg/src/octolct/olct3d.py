"""Three-dimensional octonion LCT of real-valued signals.

The transform of a real field ``f`` on a centered lattice is

    L{f}(w) = sum_x f(x) K1(x1, w1) K2(x2, w2) K3(x3, w3) dx

with kernels in the planes of ``mu1``, ``mu2`` and ``mu4`` and the products
taken strictly left to right. Right multiplication by a kernel is linear in
the left factor, so the sum can be staged one axis at a time: every pass maps
each real coefficient plane of the running value through a complex 1D LCT
and redistributes the real and imaginary parts with the multiplication table.
No associativity is used anywhere.

Arrays passed to the internal helpers may carry leading batch axes; the
short-time transform uses that to push every window shift through at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DataError, ParameterError, ResourceError, ShapeError
from .lct1d import Grid1D, LCTParams, kernel_matrix, kernel_phase, lct1d
from .octonion import MU, MUL_TABLE, embed_plane, norm_array, oct_mul_array

AXIS_UNITS = (1, 2, 4)
PARITY_TAGS = ("eee", "oee", "eoe", "ooe", "eeo", "oeo", "eoo", "ooo")

# Slot i of the octonion basis takes sin on axis k iff bit k of i is set, so
# the parity tag of slot i is odd exactly on those axes.
DIRECT_LIMIT = 20**3


Params3 = Sequence[LCTParams]
Grids3 = Sequence[Grid1D]


def _as_params(A: Params3) -> tuple[LCTParams, LCTParams, LCTParams]:
    A = tuple(A)
    if len(A) != 3 or not all(isinstance(p, LCTParams) for p in A):
        raise ParameterError("need three LCTParams, one per axis")
    return A  # type: ignore[return-value]


def triple_constant(A: Params3) -> float:
    """Product of the three 1D kernel moduli, ``1 / (2 pi sqrt(2 pi |b1 b2 b3|))``."""
    A = _as_params(A)
    return A[0].constant * A[1].constant * A[2].constant


def paired_grids(grids: Grids3, A: Params3) -> tuple[Grid1D, Grid1D, Grid1D]:
    A = _as_params(A)
    return tuple(g.paired(p) for g, p in zip(grids, A))  # type: ignore[return-value]


@dataclass(frozen=True)
class RealField3D:
    """Real samples on three centered grids."""

    samples: np.ndarray
    grids: tuple[Grid1D, Grid1D, Grid1D]

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        grids = tuple(self.grids)
        if len(grids) != 3:
            raise ShapeError("a 3D field needs three grids")
        if s.shape != tuple(g.n for g in grids):
            raise ShapeError(f"samples {s.shape} do not match grids {[g.n for g in grids]}")
        if not np.all(np.isfinite(s)):
            raise DataError("field contains non-finite values")
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "grids", grids)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.samples.shape  # type: ignore[return-value]

    @property
    def cell_volume(self) -> float:
        return float(np.prod([g.step for g in self.grids]))

    def coords(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(np.meshgrid(*(g.coords for g in self.grids), indexing="ij"))  # type: ignore

    def magnitude(self) -> np.ndarray:
        return np.abs(self.samples)

    def __add__(self, other: "RealField3D") -> "RealField3D":
        return RealField3D(self.samples + other.samples, self.grids)

    def __mul__(self, alpha: float) -> "RealField3D":
        return RealField3D(self.samples * alpha, self.grids)

    __rmul__ = __mul__


@dataclass(frozen=True)
class OctonionField3D:
    """Octonion samples ``(n1, n2, n3, 8)`` on a frequency (or signal) lattice."""

    samples: np.ndarray
    wgrids: tuple[Grid1D, Grid1D, Grid1D]

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        grids = tuple(self.wgrids)
        if len(grids) != 3 or s.shape != tuple(g.n for g in grids) + (8,):
            raise ShapeError(f"samples {s.shape} do not match grids {[g.n for g in grids]} x 8")
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "wgrids", grids)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.samples.shape[:3]  # type: ignore[return-value]

    @property
    def cell_volume(self) -> float:
        return float(np.prod([g.step for g in self.wgrids]))

    def magnitude(self) -> np.ndarray:
        return norm_array(self.samples)

    def component(self, i: int) -> np.ndarray:
        return self.samples[..., i]


def _validate(f: RealField3D, A: Params3):
    if not isinstance(f, RealField3D):
        raise ShapeError("expected a RealField3D")
    return _as_params(A)


# ---------------------------------------------------------------------------
# staged evaluation


def apply_axis(values: np.ndarray, axis: int, A: LCTParams, grid_in: Grid1D, grid_out: Grid1D,
               active: Sequence[int] = range(8), path: str = "fast") -> np.ndarray:
    """Right-multiply by one axis kernel and sum over that axis.

    ``values`` has shape ``(..., n1, n2, n3, 8)``; ``axis`` is 0, 1 or 2 and
    picks the kernel unit ``mu1``, ``mu2`` or ``mu4``. Only coefficient planes
    listed in ``active`` are read (the rest are taken to be zero).
    """
    unit = AXIS_UNITS[axis]
    ax = axis - 4
    shape = list(values.shape)
    shape[ax] = grid_out.n
    out = np.zeros(shape)
    for i in active:
        z = lct1d(values[..., i], grid_in, grid_out, A, axis=ax + 1, path=path)
        out[..., i] += z.real
        sign, k = MUL_TABLE[i][unit]
        out[..., k] += sign * z.imag
    return out


def _forward_staged(samples: np.ndarray, grids: Grids3, wgrids: Grids3, A: Params3,
                    path: str) -> np.ndarray:
    v = np.zeros(samples.shape + (8,))
    v[..., 0] = samples
    active: list[int] = [0]
    for axis in range(3):
        v = apply_axis(v, axis, A[axis], grids[axis], wgrids[axis], active, path)
        unit = AXIS_UNITS[axis]
        active = sorted(set(active) | {MUL_TABLE[i][unit][1] for i in active})
    return v


def _inverse_staged(values: np.ndarray, wgrids: Grids3, grids: Grids3, A: Params3,
                    path: str) -> np.ndarray:
    v = values
    for axis in (2, 1, 0):
        v = apply_axis(v, axis, A[axis].inverse(), wgrids[axis], grids[axis], range(8), path)
    return v


def olct_separable(f: RealField3D, A: Params3, wgrids: Grids3 | None = None,
                   path: str = "fast") -> OctonionField3D:
    """OLCT by three staged 1D passes.

    ``path="fast"`` runs each pass through the chirp-FFT route and needs the
    paired lattice; ``path="direct"`` uses the 1D Riemann sums and accepts any
    ``wgrids``.
    """
    A = _validate(f, A)
    wgrids = paired_grids(f.grids, A) if wgrids is None else tuple(wgrids)
    return OctonionField3D(_forward_staged(f.samples, f.grids, wgrids, A, path), wgrids)


def olct(f: RealField3D, A: Params3, wgrids: Grids3 | None = None, path: str = "fast") -> OctonionField3D:
    return olct_separable(f, A, wgrids, path)


def olct_inverse(F: OctonionField3D, A: Params3, grids: Grids3 | None = None, path: str = "fast",
                 return_residual: bool = False):
    """Invert with kernels of ``A3^-1, A2^-1, A1^-1`` applied in that order.

    The result is octonion valued in general; the real part is returned as the
    signal. With ``return_residual=True`` a pair ``(field, residual)`` comes
    back, where ``residual`` is the relative L2 size of the seven imaginary
    planes.
    """
    A = _as_params(A)
    grids = paired_grids(F.wgrids, A) if grids is None else tuple(grids)
    v = _inverse_staged(F.samples, F.wgrids, grids, A, path)
    result = RealField3D(v[..., 0], grids)
    if not return_residual:
        return result
    return result, imaginary_residual(v)


def imaginary_residual(values: np.ndarray) -> float:
    total = np.linalg.norm(values)
    if total == 0:
        return 0.0
    return float(np.linalg.norm(values[..., 1:]) / total)


# ---------------------------------------------------------------------------
# brute-force oracles


def _plane_kernels(A: Params3, grids: Grids3, wgrids: Grids3) -> list[np.ndarray]:
    return [embed_plane(kernel_matrix(A[k], grids[k], wgrids[k]), AXIS_UNITS[k]) for k in range(3)]


def _direct_sum(samples: np.ndarray, grids: Grids3, wgrids: Grids3, A: Params3) -> np.ndarray:
    n = [g.n for g in grids]
    m = [g.n for g in wgrids]
    if np.prod(n) > DIRECT_LIMIT or np.prod(m) > DIRECT_LIMIT:
        raise ResourceError(f"direct sum limited to {DIRECT_LIMIT} points per lattice")
    K1, K2, K3 = _plane_kernels(A, grids, wgrids)
    dvol = float(np.prod([g.step for g in grids]))
    # K1 K2 for every (x1, x2, w1, w2): (n1, n2, m1, m2, 8)
    P12 = oct_mul_array(K1[:, None, :, None, :], K2[None, :, None, :, :])
    batch = samples.shape[:-3]
    out = np.zeros(batch + tuple(m) + (8,))
    for j2 in range(m[1]):
        left = P12[:, :, None, :, j2, :]  # (n1, n2, 1, m1, 8)
        for k3 in range(m[2]):
            P = oct_mul_array(left, K3[None, None, :, None, k3, :])  # (n1, n2, n3, m1, 8)
            out[..., :, j2, k3, :] = np.einsum("...abc,abcik->...ik", samples, P) * dvol
    return out


def olct_direct(f: RealField3D, A: Params3, wgrids: Grids3 | None = None) -> OctonionField3D:
    """Triple sum over the full kernel product, evaluated left to right."""
    A = _validate(f, A)
    wgrids = paired_grids(f.grids, A) if wgrids is None else tuple(wgrids)
    return OctonionField3D(_direct_sum(f.samples, f.grids, wgrids, A), wgrids)


def olct_direct_at(f: RealField3D, A: Params3, indices, wgrids: Grids3 | None = None) -> np.ndarray:
    """Direct sum at selected output points ``indices`` of shape ``(P, 3)``; returns ``(P, 8)``.

    Memory is one full-lattice kernel product per point, so this works on
    lattices far past :data:`DIRECT_LIMIT`.
    """
    A = _validate(f, A)
    wgrids = paired_grids(f.grids, A) if wgrids is None else tuple(wgrids)
    indices = np.asarray(indices, dtype=int).reshape(-1, 3)
    K = _plane_kernels(A, f.grids, wgrids)
    out = np.empty((len(indices), 8))
    for row, (i, j, k) in enumerate(indices):
        P12 = oct_mul_array(K[0][:, None, i, :], K[1][None, :, j, :])
        P = oct_mul_array(P12[:, :, None, :], K[2][None, None, :, k, :])
        out[row] = np.einsum("abc,abck->k", f.samples, P) * f.cell_volume
    return out


def olct_inverse_direct(F: OctonionField3D, A: Params3, grids: Grids3 | None = None) -> np.ndarray:
    """Full inverse sum ``sum_w ((F K3') K2') K1' dw``; returns octonion samples."""
    A = _as_params(A)
    grids = paired_grids(F.wgrids, A) if grids is None else tuple(grids)
    m = [g.n for g in F.wgrids]
    n = [g.n for g in grids]
    if np.prod(n) > 12**3 or np.prod(m) > 12**3:
        raise ResourceError("direct inverse limited to 12^3 lattices")
    Ainv = [p.inverse() for p in A]
    K1, K2, K3 = _plane_kernels(Ainv, F.wgrids, grids)  # K[w_index, x_index]
    dvol = float(np.prod([g.step for g in F.wgrids]))
    Fv = F.samples
    # ((F(w) K3'(w3, x3)) K2'(w2, x2)) K1'(w1, x1), summed over w
    t3 = oct_mul_array(Fv[:, :, :, None, :], K3[None, None, :, :, :])  # m1 m2 m3 n3
    t2 = oct_mul_array(t3[:, :, :, :, None, :], K2[None, :, None, None, :, :])  # m1 m2 m3 n3 n2
    out = np.zeros(tuple(n) + (8,))
    for i1 in range(n[0]):
        t1 = oct_mul_array(t2, K1[:, None, None, None, None, i1, :])
        out[i1] = t1.sum(axis=(0, 1, 2)).transpose(1, 0, 2) * dvol
    return out


# ---------------------------------------------------------------------------
# parity decomposition


def _parity_parts(samples: np.ndarray) -> np.ndarray:
    """Split the last three axes into eight parity parts, slot-indexed, shape ``(8, ...)``."""
    parts = [samples]
    for axis in range(3):
        ax = axis - 3
        nxt = []
        for p in parts:
            flipped = np.flip(p, axis=ax)
            nxt.append(((p + flipped) / 2, (p - flipped) / 2))
        # slot bit for this axis is 2**axis
        parts = [None] * (2 * len(parts))  # type: ignore[list-item]
        for idx, (even, odd) in enumerate(nxt):
            parts[idx] = even
            parts[idx + (1 << axis)] = odd
    return np.stack(parts)


def parity_split(f: RealField3D) -> dict[str, RealField3D]:
    """Eight parity parts keyed by tag (``"eee"``, ``"oee"``, ...); they sum to ``f``."""
    if not isinstance(f, RealField3D):
        raise ShapeError("expected a RealField3D")
    parts = _parity_parts(f.samples)
    return {tag: RealField3D(parts[i], f.grids) for i, tag in enumerate(PARITY_TAGS)}


def _trig_matrices(A: Params3, grids: Grids3, wgrids: Grids3) -> list[tuple[np.ndarray, np.ndarray]]:
    mats = []
    for k in range(3):
        K = kernel_matrix(A[k], grids[k], wgrids[k]) * grids[k].step
        mats.append((K.real, K.imag))
    return mats


def _parity_integrals(samples: np.ndarray, grids: Grids3, wgrids: Grids3, A: Params3) -> np.ndarray:
    """All 64 integrals of parity part ``p`` against slot coefficient ``i``.

    Returns shape ``(8 parts, 8 slots, ..., m1, m2, m3)``. Slot ``i`` uses
    sin on axis ``k`` when bit ``k`` of ``i`` is set (``c1 c2 c3``,
    ``s1 c2 c3``, ``c1 s2 c3``, ``s1 s2 c3``, ``c1 c2 s3``, ``s1 c2 s3``,
    ``c1 s2 s3``, ``s1 s2 s3``).
    """
    parts = _parity_parts(samples)
    mats = _trig_matrices(A, grids, wgrids)
    out = []
    for p in range(8):
        per_slot = []
        for i in range(8):
            v = parts[p]
            for k in range(3):
                T = mats[k][(i >> k) & 1]
                v = np.moveaxis(np.moveaxis(v, k - 3, -1) @ T, -1, k - 3)
            per_slot.append(v)
        out.append(per_slot)
    return np.array(out)


@dataclass(frozen=True)
class ParityOctet:
    """Eight real frequency-domain parity components.

    ``components[i]`` is the full coefficient of ``mu_i``: the slot's
    cos/sin integral over every parity part of the signal. ``matched[i]`` keeps
    only the part whose parity equals the slot's tag. The two agree when the
    kernel phase is odd in ``x``; chirp terms and the ``-pi/2`` offset make the
    cross-parity terms nonzero in general.
    """

    components: np.ndarray
    matched: np.ndarray
    wgrids: tuple[Grid1D, ...] = field(default=())

    def __getattr__(self, name: str):
        if name.startswith("L_") and name[2:] in PARITY_TAGS:
            return self.components[PARITY_TAGS.index(name[2:])]
        raise AttributeError(name)

    def reassemble(self) -> np.ndarray:
        return np.moveaxis(self.components, 0, -1).copy()

    def reassemble_matched(self) -> np.ndarray:
        return np.moveaxis(self.matched, 0, -1).copy()

    def leakage(self) -> float:
        """Relative L2 size of the cross-parity terms."""
        total = np.linalg.norm(self.components)
        return 0.0 if total == 0 else float(np.linalg.norm(self.components - self.matched) / total)


def olct_parity_components(f: RealField3D, A: Params3, wgrids: Grids3 | None = None) -> ParityOctet:
    A = _validate(f, A)
    wgrids = paired_grids(f.grids, A) if wgrids is None else tuple(wgrids)
    table = _parity_integrals(f.samples, f.grids, wgrids, A)
    full = table.sum(axis=0)
    matched = np.array([table[i, i] for i in range(8)])
    return ParityOctet(full, matched, tuple(wgrids))


# ---------------------------------------------------------------------------
# single-unit 3D LCT and its relation to the OLCT


def _lct3d_complex(samples: np.ndarray, grids: Grids3, wgrids: Grids3, A: Params3, path: str) -> np.ndarray:
    z = samples.astype(complex)
    for k in range(3):
        z = lct1d(z, grids[k], wgrids[k], A[k], axis=k - 3, path=path)
    return z


def lct3d(f: RealField3D, A: Params3, wgrids: Grids3 | None = None, path: str = "fast") -> OctonionField3D:
    """3D LCT with the shared unit ``mu1`` on every axis; output in ``span{1, mu1}``."""
    A = _validate(f, A)
    wgrids = paired_grids(f.grids, A) if wgrids is None else tuple(wgrids)
    z = _lct3d_complex(f.samples, f.grids, wgrids, A, path)
    return OctonionField3D(embed_plane(z, 1), wgrids)


def lct3d_direct(f: RealField3D, A: Params3, wgrids: Grids3 | None = None) -> OctonionField3D:
    """Unstaged sum with the full phase ``exp(mu1 (xi1 + xi2 + xi3))``."""
    A = _validate(f, A)
    wgrids = paired_grids(f.grids, A) if wgrids is None else tuple(wgrids)
    if f.samples.size > DIRECT_LIMIT:
        raise ResourceError("direct 3D LCT limited to small lattices")
    xi = [kernel_phase(A[k], f.grids[k].coords[:, None], wgrids[k].coords[None, :]) for k in range(3)]
    phase = (xi[0][:, None, None, :, None, None] + xi[1][None, :, None, None, :, None]
             + xi[2][None, None, :, None, None, :])
    kern = triple_constant(A) * f.cell_volume * np.exp(1j * phase)
    z = np.einsum("abc,abcijk->ijk", f.samples, kern)
    return OctonionField3D(embed_plane(z, 1), wgrids)


def combine_four(L_pp: np.ndarray, L_pm: np.ndarray, L_mp: np.ndarray, L_mm: np.ndarray,
                 printed_sign: bool = False) -> np.ndarray:
    """Assemble an OLCT-type octonion from four single-unit evaluations.

    Arguments are octonion arrays in ``span{1, mu1}``: ``L_pp`` uses
    ``(A1, A2, A3)``, ``L_pm`` uses ``(A1, A2, A3')``, ``L_mp`` uses
    ``(A1, A2', A3)`` and ``L_mm`` uses ``(A1, A2', A3')`` where
    ``A' = (a, -b, -c, d)`` negates the kernel phase.

    The ``mu4 .. mu7`` half is multiplied by ``-mu5``. Multiplying by ``+mu5``
    (``printed_sign=True``) negates those four coefficients and no longer
    reproduces the transform.
    """
    one_minus = (MU[0] - MU[3]).coeffs
    one_plus = (MU[0] + MU[3]).coeffs
    even = 0.25 * (oct_mul_array(L_pp + L_pm, one_minus) + oct_mul_array(L_mp + L_mm, one_plus))
    odd = 0.25 * (oct_mul_array(L_pp - L_pm, one_minus) + oct_mul_array(L_mp - L_mm, one_plus))
    mu5 = MU[5].coeffs if printed_sign else -MU[5].coeffs
    return even + oct_mul_array(odd, mu5)


def olct_from_lct3d(f: RealField3D, A: Params3, wgrids: Grids3 | None = None, path: str = "fast",
                    printed_sign: bool = False) -> OctonionField3D:
    """OLCT assembled from four 3D LCTs that flip the sign of ``b2`` and/or ``b3``."""
    A1, A2, A3 = _validate(f, A)
    wgrids = paired_grids(f.grids, (A1, A2, A3)) if wgrids is None else tuple(wgrids)

    def run(p2: LCTParams, p3: LCTParams) -> np.ndarray:
        return lct3d(f, (A1, p2, p3), wgrids, path).samples

    L = combine_four(run(A2, A3), run(A2, A3.flipped()), run(A2.flipped(), A3),
                     run(A2.flipped(), A3.flipped()), printed_sign)
    return OctonionField3D(L, wgrids)
