"""Numerical checks of the norm inequalities and the convolution identity.

Every ``check_*`` function evaluates both sides of one inequality on a
concrete fixture and returns an :class:`InequalityReport` (``lhs <= rhs`` is
the claim being tested). Nothing here asserts; callers decide what a failed
report means.

Shared notation: ``C = prod_k 1/sqrt(2 pi |b_k|)`` is the modulus of the
three-axis kernel product (see :func:`octolct.olct3d.triple_constant`).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Any, Sequence

import numpy as np
import scipy.signal
from scipy.special import digamma

from .errors import ParameterError, ResourceError, ShapeError
from .io import generate
from .lct1d import Grid1D, LCTParams
from .octonion import MU, conj_array, norm_array, oct_mul_array, Octonion
from .olct3d import OctonionField3D, RealField3D, _as_params, olct, triple_constant
from .stolct import (
    StolctField,
    Window3D,
    shift_lattice,
    shifted_window,
    stolct,
    stolct_at_shifts,
    stolct_forward,
    stolct_matched_parity_at,
    stolct_via_olct,
)

REL_TOL = 1e-9
CONV_LIMIT = 9**3
CONV_U_LIMIT = 3**3


@dataclass(frozen=True)
class InequalityReport:
    """Both sides of ``lhs <= rhs`` on one fixture."""

    name: str
    lhs: float
    rhs: float
    constant: float
    margin: float
    passed: bool
    fixture: str
    details: dict = field(default_factory=dict)

    @classmethod
    def build(cls, name: str, lhs: float, rhs: float, constant: float, fixture: str,
              details: dict | None = None) -> "InequalityReport":
        lhs, rhs = float(lhs), float(rhs)
        tol = REL_TOL * max(abs(lhs), abs(rhs), 1.0)
        return cls(name, lhs, rhs, float(constant), rhs - lhs, bool(lhs <= rhs + tol), fixture,
                   dict(details or {}))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ConcentrationRegion:
    """Set of cells in the ``(u, w)`` lattice, stored as flat indices."""

    cells: np.ndarray
    shape: tuple[int, ...]
    cell_volume: float
    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ParameterError("epsilon must lie in [0, 1]")

    @property
    def measure(self) -> float:
        return len(self.cells) * self.cell_volume

    def mask(self) -> np.ndarray:
        m = np.zeros(int(np.prod(self.shape)), dtype=bool)
        m[self.cells] = True
        return m.reshape(self.shape)

    @classmethod
    def from_mask(cls, G: StolctField, mask: np.ndarray) -> "ConcentrationRegion":
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != G.samples.shape[:-1]:
            raise ShapeError("mask must cover the (u, w) lattice")
        energy = float(np.sum(norm_array(G.samples)[mask] ** 2) * G.cell_volume)
        return cls(np.flatnonzero(mask), mask.shape, G.cell_volume, min(1.0, max(0.0, 1.0 - energy)))


def top_energy_region(G: StolctField, fraction: float = 0.9) -> ConcentrationRegion:
    """Fewest cells whose energy reaches ``fraction`` of the total (greedy by cell energy)."""
    if not 0.0 <= fraction <= 1.0:
        raise ParameterError("fraction must lie in [0, 1]")
    e = (norm_array(G.samples) ** 2).ravel() * G.cell_volume
    order = np.argsort(-e, kind="stable")
    cum = np.cumsum(e[order])
    k = int(np.searchsorted(cum, fraction * cum[-1], side="left")) + 1 if cum[-1] > 0 else 0
    mask = np.zeros(e.size, dtype=bool)
    mask[order[: min(k, e.size)]] = True
    return ConcentrationRegion.from_mask(G, mask.reshape(G.samples.shape[:-1]))


# ---------------------------------------------------------------------------
# norms, inner products, convolution


def _magnitude_and_volume(f) -> tuple[np.ndarray, float]:
    if isinstance(f, (RealField3D, Window3D)):
        return np.abs(f.samples), f.cell_volume
    if isinstance(f, (OctonionField3D, StolctField)):
        return norm_array(f.samples), f.cell_volume
    raise ParameterError(f"cannot take the norm of {type(f).__name__}")


def lp_norm_values(magnitude: np.ndarray, cell_volume: float, p: float, axis=None) -> np.ndarray | float:
    """``(sum |v|^p dV)^(1/p)`` over ``axis`` (all axes by default); ``p = inf`` gives the max."""
    p = float(p)
    if not p >= 1:
        raise ParameterError(f"p must be >= 1, got {p}")
    magnitude = np.abs(magnitude)
    if math.isinf(p):
        return np.max(magnitude, axis=axis)
    return (np.sum(magnitude**p, axis=axis) * cell_volume) ** (1.0 / p)


def lp_norm(f, p: float) -> float:
    """Discrete ``L^p`` norm of a real, octonion or short-time field."""
    mag, vol = _magnitude_and_volume(f)
    return float(lp_norm_values(mag, vol, p))


def inner_product(f, g):
    """``sum f conj(g) dV``: a float for real fields, an :class:`Octonion` otherwise."""
    if type(f) is not type(g):
        raise ShapeError("inner product needs two fields of the same kind")
    if f.samples.shape != g.samples.shape:
        raise ShapeError(f"shape mismatch {f.samples.shape} vs {g.samples.shape}")
    if isinstance(f, (RealField3D, Window3D)):
        return float(np.sum(f.samples * g.samples) * f.cell_volume)
    if isinstance(f, (OctonionField3D, StolctField)):
        prod = oct_mul_array(f.samples, conj_array(g.samples))
        return Octonion(prod.reshape(-1, 8).sum(axis=0) * f.cell_volume)
    raise ParameterError(f"cannot pair {type(f).__name__}")


def convolve(f: RealField3D, g: RealField3D) -> RealField3D:
    """``(f * g)(x) = sum_y f(y) g(x - y) dV`` on the lattice of ``f``, zero outside."""
    if f.samples.shape != g.samples.shape or tuple(f.grids) != tuple(g.grids):
        raise ShapeError("convolution needs matching lattices")
    if not all(grid.has_origin for grid in f.grids):
        # x - y lands between samples when the lattice has no point at 0
        raise ShapeError("convolution needs odd lattices")
    out = scipy.signal.convolve(f.samples, g.samples, mode="same", method="direct")
    return RealField3D(out * f.cell_volume, f.grids)


# ---------------------------------------------------------------------------
# helpers shared by the checks


def conjugate_exponent(p: float) -> float:
    p = float(p)
    if not p >= 1:
        raise ParameterError(f"exponent must be >= 1, got {p}")
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


def _check_conjugate(p: float, q: float) -> None:
    if p < 1 or q < 1:
        raise ParameterError("exponents must be >= 1")
    s = (0.0 if math.isinf(p) else 1 / p) + (0.0 if math.isinf(q) else 1 / q)
    if abs(s - 1.0) > 1e-12:
        raise ParameterError(f"1/p + 1/q = {s}, not 1")


def _transform(f: RealField3D, window: Window3D, A, G: StolctField | None) -> StolctField:
    return stolct(f, window, A) if G is None else G


def _bprod(A) -> tuple[float, float, float]:
    return tuple(abs(p.b) for p in A)  # type: ignore[return-value]


def _fmt(p: float) -> str:
    return "inf" if math.isinf(p) else f"{p:.6g}"


# ---------------------------------------------------------------------------
# inequality checks


def check_sup_bound(f: RealField3D, window: Window3D, A, p: float = 2.0, q: float = 2.0,
                    G: StolctField | None = None, fixture: str = "") -> InequalityReport:
    """``max |G| <= C ||f||_p ||phi||_q`` for conjugate ``p, q``."""
    _check_conjugate(p, q)
    A = _as_params(A)
    G = _transform(f, window, A, G)
    C = triple_constant(A)
    lhs = float(np.max(norm_array(G.samples))) if G.samples.size else 0.0
    rhs = C * lp_norm(f, p) * lp_norm(window, q)
    return InequalityReport.build(f"sup_bound[p={_fmt(p)},q={_fmt(q)}]", lhs, rhs, C, fixture)


def check_minkowski(f: RealField3D, window: Window3D, A, p: float = 2.0,
                    G: StolctField | None = None, fixture: str = "") -> InequalityReport:
    """``C sum_x |f(x)| ||phi(x - .)||_{L^p(u)} dx <= C ||f||_1 ||phi||_p``.

    The left side is the windowed product's ``L^p`` norm over shifts,
    integrated over ``x``. ``details["transform_side"]`` holds
    ``max_w ||G(w, .)||_{L^p(u)}``, which that quantity dominates.
    """
    A = _as_params(A)
    C = triple_constant(A)
    G = _transform(f, window, A, G)
    du = float(np.prod([g.step for g in G.ugrids]))
    shifted = shifted_window(window, G.ugrids)  # (U1, U2, U3, n1, n2, n3)
    per_x = lp_norm_values(shifted, du, p, axis=(0, 1, 2))
    lhs = C * float(np.sum(np.abs(f.samples) * per_x) * f.cell_volume)
    rhs = C * lp_norm(f, 1) * lp_norm(window, p)
    transform_side = float(np.max(lp_norm_values(norm_array(G.samples), du, p, axis=(0, 1, 2))))
    details = {"transform_side": transform_side, "transform_side_le_lhs": transform_side <= lhs * (1 + REL_TOL)}
    return InequalityReport.build(f"minkowski[p={_fmt(p)}]", lhs, rhs, C, fixture, details)


def _require_unit(value: float, what: str) -> None:
    if abs(value - 1.0) > 1e-9:
        raise ParameterError(f"{what} must be normalized to 1, got {value}")


def check_concentration(f: RealField3D, window: Window3D, A, region: ConcentrationRegion | None = None,
                        G: StolctField | None = None, fraction: float = 0.9,
                        fixture: str = "") -> InequalityReport:
    """``(1 - eps) / C <= m(Omega)`` for unit-norm ``f`` and ``phi``.

    ``eps = 1 - energy of G inside Omega`` (clipped to ``[0, 1]``). With no
    region given, the greedy top-energy region holding ``fraction`` of the
    energy is used. ``details["sharp_bound"]`` is ``(1 - eps) / C^2``, which
    follows from the sup bound and is the tighter statement.
    """
    A = _as_params(A)
    _require_unit(lp_norm(f, 2), "||f||_2")
    _require_unit(lp_norm(window, 2), "||phi||_2")
    G = _transform(f, window, A, G)
    if region is None:
        region = top_energy_region(G, fraction)
    elif region.shape != G.samples.shape[:-1]:
        raise ShapeError("region does not match the transform lattice")
    eps = ConcentrationRegion.from_mask(G, region.mask()).epsilon
    C = triple_constant(A)
    lhs = (1.0 - eps) / C
    details = {"epsilon": eps, "cells": int(len(region.cells)), "sharp_bound": (1.0 - eps) / C**2}
    return InequalityReport.build("concentration", lhs, region.measure, 1.0 / C, fixture, details)


def hausdorff_young_constant(A, q: float) -> float:
    """Prefactor ``|b1 b2|^(-1/2 + 1/q) / ((2 pi)^(1/(2q) + 1) |b3|^(1/(2q)))``."""
    b1, b2, b3 = _bprod(_as_params(A))
    iq = 0.0 if math.isinf(q) else 1.0 / q
    return (b1 * b2) ** (-0.5 + iq) / ((2 * math.pi) ** (iq / 2 + 1) * b3 ** (iq / 2))


def interpolated_constant(A, q: float) -> float:
    """``C^(1 - 2/q)``: Riesz-Thorin between the sup bound and unitarity."""
    iq = 0.0 if math.isinf(q) else 1.0 / q
    return triple_constant(_as_params(A)) ** (1.0 - 2.0 * iq)


def check_hausdorff_young(f: RealField3D, A, p: float, F: OctonionField3D | None = None,
                          fixture: str = "") -> InequalityReport:
    """``||OLCT f||_q <= K_q ||f||_p`` with :func:`hausdorff_young_constant`.

    ``details`` also reports the same comparison against
    :func:`interpolated_constant`.
    """
    p = float(p)
    if not 1.0 <= p <= 2.0:
        raise ParameterError(f"p must lie in [1, 2], got {p}")
    A = _as_params(A)
    q = conjugate_exponent(p)
    F = olct(f, A) if F is None else F
    lhs = lp_norm(F, q)
    fp = lp_norm(f, p)
    K = hausdorff_young_constant(A, q)
    K_int = interpolated_constant(A, q)
    details = {"q": _fmt(q), "interpolated_constant": K_int, "interpolated_rhs": K_int * fp,
               "interpolated_passed": lhs <= K_int * fp * (1 + REL_TOL) + REL_TOL}
    return InequalityReport.build(f"hausdorff_young[p={_fmt(p)}]", lhs, K * fp, K, fixture, details)


def lieb_E(p: float, q: float) -> float:
    """``(4/q)^(1/q) (4/p)^(1/p)``, with ``(4/inf)^0 = 1``."""
    def term(r):
        return 1.0 if math.isinf(r) else (4.0 / r) ** (1.0 / r)
    return term(q) * term(p)


def lieb_constant(A, p: float, q: float) -> float:
    """``|b1 b2|^(1 - q/2) / ((2 pi)^(q + 1/2) |b3|^(1/2)) * E(p, q)``."""
    b1, b2, b3 = _bprod(_as_params(A))
    return (b1 * b2) ** (1.0 - q / 2.0) / ((2 * math.pi) ** (q + 0.5) * math.sqrt(b3)) * lieb_E(p, q)


def check_lieb(f: RealField3D, window: Window3D, A, p: float = 2.0, G: StolctField | None = None,
               allow_other_exponents: bool = False, fixture: str = "") -> InequalityReport:
    """``||G||_{L^q(w, u)} <= lieb_constant * ||f||_2 ||phi||_2``, ``q = p / (p - 1)``.

    Only ``p = 2`` runs unless ``allow_other_exponents`` is set, because
    the bound's exponents are ambiguous away from the self-conjugate point;
    the reading used is stored in ``details["interpretation"]``.
    """
    p = float(p)
    if not p >= 2.0:
        raise ParameterError(f"p must lie in [2, inf], got {p}")
    if p != 2.0 and not allow_other_exponents:
        raise ParameterError("exponents other than p = q = 2 need allow_other_exponents=True")
    A = _as_params(A)
    q = conjugate_exponent(p)
    G = _transform(f, window, A, G)
    lhs = lp_norm(G, q)
    norms = lp_norm(f, 2) * lp_norm(window, 2)
    K = lieb_constant(A, p, q)
    K_int = interpolated_constant(A, q)
    details = {
        "interpretation": f"q = p/(p-1) = {_fmt(q)}; lhs is the L^q norm over the (w, u) lattice",
        "E": lieb_E(p, q),
        "interpolated_constant": K_int,
        "interpolated_rhs": K_int * norms,
        "interpolated_passed": lhs <= K_int * norms * (1 + REL_TOL) + REL_TOL,
    }
    return InequalityReport.build(f"lieb[p={_fmt(p)},q={_fmt(q)}]", lhs, K * norms, K, fixture, details)


def log_constant() -> float:
    """``ln 2 + psi(1/2)``, about ``-1.27036``."""
    return math.log(2.0) + float(digamma(0.5))


@lru_cache(maxsize=64)
def _origin_cell_log(steps: tuple[float, float, float], sub: int = 48) -> float:
    # midpoint rule; an even subdivision never samples the singular point
    axes = [(np.arange(sub) + 0.5) / sub - 0.5 for _ in range(3)]
    y = np.meshgrid(*[a * s for a, s in zip(axes, steps)], indexing="ij")
    return float(np.mean(0.5 * np.log(y[0] ** 2 + y[1] ** 2 + y[2] ** 2)))


def log_weights(grids: Sequence[Grid1D], origin: str = "average") -> np.ndarray:
    """``ln |x|`` on a lattice; the origin cell gets its cell average (or 0 with ``origin="skip"``)."""
    if origin not in ("average", "skip"):
        raise ParameterError("origin must be 'average' or 'skip'")
    x = np.meshgrid(*[g.coords for g in grids], indexing="ij")
    r2 = x[0] ** 2 + x[1] ** 2 + x[2] ** 2
    out = np.zeros_like(r2)
    nz = r2 > 0
    out[nz] = 0.5 * np.log(r2[nz])
    if not nz.all():
        out[~nz] = _origin_cell_log(tuple(g.step for g in grids)) if origin == "average" else 0.0
    return out


def check_log_uncertainty(f: RealField3D, window: Window3D, A, G: StolctField | None = None,
                          origin: str = "average", fixture: str = "") -> InequalityReport:
    """Logarithmic uncertainty with constant ``D = ln 2 + psi(1/2)``.

    Reported as ``lhs = D ||f||^2 ||phi||^2`` against
    ``rhs = 2 pi |b3| sum ln|w| |G|^2 dw du + ||phi||^2 sum ln|x| f^2 dx``.
    """
    A = _as_params(A)
    G = _transform(f, window, A, G)
    D = log_constant()
    fn2 = lp_norm(f, 2) ** 2
    pn2 = lp_norm(window, 2) ** 2
    lw = log_weights(G.wgrids, origin)
    lx = log_weights(f.grids, origin)
    energy_w = np.sum(norm_array(G.samples) ** 2, axis=(0, 1, 2))
    freq = 2 * math.pi * abs(A[2].b) * float(np.sum(lw * energy_w) * G.cell_volume)
    space = pn2 * float(np.sum(lx * f.samples**2) * f.cell_volume)
    details = {"frequency_term": freq, "space_term": space, "origin": origin}
    return InequalityReport.build("log_uncertainty", D * fn2 * pn2, freq + space, D, fixture, details)


# ---------------------------------------------------------------------------
# convolution identity (diagnostic)


@dataclass(frozen=True)
class ConvolutionReport:
    lhs_definition: np.ndarray
    lhs_via_olct: np.ndarray
    rhs: np.ndarray
    lhs_agreement: float
    discrepancy: float
    digest: str
    fixture: str

    def to_dict(self) -> dict:
        return {"name": "convolution_identity", "lhs_agreement": self.lhs_agreement,
                "discrepancy": self.discrepancy, "digest": self.digest, "fixture": self.fixture,
                "lhs_norm": float(np.linalg.norm(self.lhs_definition)),
                "rhs_norm": float(np.linalg.norm(self.rhs))}


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    nb = np.linalg.norm(b)
    diff = np.linalg.norm(a - b)
    return float(diff / nb) if nb > 0 else float(diff)


# frequency used for the g-factor of each slot: (flip w1, flip w2, flip w3)
_CONV_FLIPS = (
    (False, False, False),  # w
    (False, True, True),    # t
    (False, False, True),   # s
    (False, True, True),    # t
    (False, False, False),  # w
    (False, False, True),   # s
    (True, False, True),    # t'
    (True, False, True),    # t'
)


def check_convolution_theorem(f: RealField3D, g: RealField3D, phi: Window3D, psi: Window3D, A,
                              ugrids=None, fixture: str = "") -> ConvolutionReport:
    """Evaluate both sides of the stated convolution identity.

    The left side is the transform of ``f * g`` with window ``phi * psi``,
    computed once from the defining sum and once through the staged OLCT.
    The right side sums over shifts ``m`` the eight products of the
    ``g``-transform at ``w`` or a sign-flipped frequency with the matched
    parity components of the ``f``-transform at ``u - m``. Nothing is
    asserted; the relative gap is returned as ``discrepancy``.
    """
    A = _as_params(A)
    grids = tuple(f.grids)
    for other in (g, phi, psi):
        if tuple(other.grids) != grids:
            raise ShapeError("all four inputs must share one lattice")
    if np.prod([gr.n for gr in grids]) > CONV_LIMIT:
        raise ResourceError(f"convolution check limited to {CONV_LIMIT} samples")
    if ugrids is None:
        ugrids = shift_lattice(grids, [max(1, (gr.n - 1) // 2) for gr in grids])
    if np.prod([u.n for u in ugrids]) > CONV_U_LIMIT:
        raise ResourceError(f"convolution check limited to {CONV_U_LIMIT} shifts")

    fg = convolve(f, g)
    window = convolve(phi.as_field(), psi.as_field())
    if not np.any(window.samples):
        raise ParameterError("phi * psi vanishes on the lattice")
    window = Window3D.from_field(window)
    lhs_def = stolct_forward(fg, window, A, ugrids).samples
    lhs_via = stolct_via_olct(fg, window, A, ugrids).samples

    n = np.array([gr.n for gr in grids])
    m_axes = [np.arange(-(k - 1), k) for k in n]
    m_shifts = np.stack(np.meshgrid(*m_axes, indexing="ij"), axis=-1).reshape(-1, 3)
    Gg = stolct_at_shifts(g, psi, A, m_shifts)  # (M, W1, W2, W3, 8)
    variants = []
    for flips in _CONV_FLIPS:
        axes = tuple(1 + k for k in range(3) if flips[k])
        variants.append(np.flip(Gg, axis=axes) if axes else Gg)

    u_idx = [np.rint(u.coords / gr.step).astype(int) for u, gr in zip(ugrids, grids)]
    u_shifts = np.stack(np.meshgrid(*u_idx, indexing="ij"), axis=-1).reshape(-1, 3)
    diff = u_shifts[:, None, :] - m_shifts[None, :, :]  # (U, M, 3)
    uniq, inverse = np.unique(diff.reshape(-1, 3), axis=0, return_inverse=True)
    inverse = inverse.reshape(diff.shape[:2])
    Gf = stolct_matched_parity_at(f, phi, A, uniq)  # (8, S, W1, W2, W3)

    dm = f.cell_volume
    rhs = np.zeros((len(u_shifts),) + Gg.shape[1:])
    for i in range(8):
        left = oct_mul_array(variants[i], MU[i].coeffs)  # (M, W..., 8)
        right = Gf[i][inverse]  # (U, M, W...)
        rhs += np.einsum("mabck,umabc->uabck", left, right) * dm
    U = tuple(u.n for u in ugrids)
    rhs = rhs.reshape(U + rhs.shape[1:])

    digest = hashlib.sha256()
    for arr in (lhs_def, rhs):
        digest.update(np.round(arr, 12).tobytes())
    return ConvolutionReport(lhs_def, lhs_via, rhs, _rel(lhs_via, lhs_def), _rel(rhs, lhs_def),
                             digest.hexdigest(), fixture)


# ---------------------------------------------------------------------------
# canonical battery


@dataclass(frozen=True)
class Fixture:
    name: str
    f: RealField3D
    window: Window3D
    A: tuple[LCTParams, LCTParams, LCTParams]

    def describe(self) -> dict[str, Any]:
        return {"name": self.name, "shape": list(self.f.samples.shape),
                "steps": [g.step for g in self.f.grids], "matrices": [p.as_tuple() for p in self.A]}


def random_params(rng: np.random.Generator, b_range=(0.5, 2.0)) -> tuple[LCTParams, LCTParams, LCTParams]:
    """Unit-determinant triple with ``|b_k|`` uniform in ``b_range`` and random sign."""
    out = []
    for _ in range(3):
        b = rng.uniform(*b_range) * rng.choice((-1.0, 1.0))
        a = rng.uniform(-1.5, 1.5)
        d = rng.uniform(-1.5, 1.5)
        out.append(LCTParams(a, b, (a * d - 1.0) / b, d))
    return tuple(out)  # type: ignore[return-value]


def _unit(f: RealField3D) -> RealField3D:
    return f * (1.0 / lp_norm(f, 2))


BATTERY_PAIRS = (
    ("gaussian", {"sigma": 1.0}, "gaussian", {"sigma": 1.0}),
    ("chirped-gaussian", {"sigma": 1.2, "chirp": 0.5}, "gaussian", {"sigma": 0.8}),
    ("gaussian", {"sigma": 0.9}, "box", {"radius": 1.0}),
)


def canonical_battery(n: int = 11, step: float = 0.8, seed: int = 20240607, n_params: int = 5) -> list[Fixture]:
    """Signal/window pairs (Gaussian, chirped Gaussian, box window) under random matrices.

    Signals and windows are scaled to unit ``L^2`` norm.
    """
    grids = (Grid1D(n, step),) * 3
    rng = np.random.default_rng(seed)
    params = [random_params(rng) for _ in range(n_params)]
    fixtures = []
    for k, A in enumerate(params):
        for fk, fp, wk, wp in BATTERY_PAIRS:
            f = _unit(generate(fk, grids, fp))
            w = Window3D.from_field(_unit(generate(wk, grids, wp)))
            fixtures.append(Fixture(f"{fk}/{wk}/A{k}", f, w, A))
    return sorted(fixtures, key=lambda fx: fx.name)


HY_EXPONENTS = (1.0, 4.0 / 3.0, 2.0)


def run_fixture(fx: Fixture) -> list[InequalityReport]:
    G = stolct(fx.f, fx.window, fx.A)
    F = olct(fx.f, fx.A)
    reports = [
        check_sup_bound(fx.f, fx.window, fx.A, 2.0, 2.0, G=G, fixture=fx.name),
        check_minkowski(fx.f, fx.window, fx.A, 2.0, G=G, fixture=fx.name),
        check_concentration(fx.f, fx.window, fx.A, G=G, fixture=fx.name),
    ]
    reports += [check_hausdorff_young(fx.f, fx.A, p, F=F, fixture=fx.name) for p in HY_EXPONENTS]
    reports.append(check_lieb(fx.f, fx.window, fx.A, 2.0, G=G, fixture=fx.name))
    reports.append(check_log_uncertainty(fx.f, fx.window, fx.A, G=G, fixture=fx.name))
    return reports


def run_battery(fixtures: Sequence[Fixture] | None = None) -> list[InequalityReport]:
    fixtures = canonical_battery() if fixtures is None else fixtures
    reports: list[InequalityReport] = []
    for fx in sorted(fixtures, key=lambda fx: fx.name):
        reports.extend(run_fixture(fx))
    return reports


def battery_document(reports: Sequence[InequalityReport], fixtures: Sequence[Fixture]) -> str:
    doc = {
        "reports": [r.to_dict() for r in reports],
        "fixtures": [fx.describe() for fx in fixtures],
        "tolerance": {"relative": REL_TOL},
        "all_passed": all(r.passed for r in reports),
    }
    return json.dumps(doc, indent=2, sort_keys=True, default=_json_default)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
