"""Octonion and quaternion arithmetic.

Coefficients are stored as eight doubles ``(s0, ..., s7)`` over the basis
``{1, mu1, ..., mu7}``. Index ``i`` is the unit ``mu_i`` and index 0 is the
real unit. Array-valued octonions keep the eight coefficients on the last
axis, so a field of octonions on a 3D lattice has shape ``(n1, n2, n3, 8)``.

The product is fixed by the multiplication table below (row times column).
Quaternions are the subalgebra spanned by ``{1, mu1, mu2, mu3}`` and every
octonion splits as ``a + b mu4`` with quaternions ``a`` and ``b``.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .errors import ParameterError

# Row i, column j holds mu_i * mu_j. "1" is the real unit, "uK" is mu_K.
_TABLE_ROWS = (
    "1    u1   u2   u3   u4   u5   u6   u7",
    "u1   -1   u3   -u2  u5   -u4  -u7  u6",
    "u2   -u3  -1   u1   u6   u7   -u4  -u5",
    "u3   u2   -u1  -1   u7   -u6  u5   -u4",
    "u4   -u5  -u6  -u7  -1   u1   u2   u3",
    "u5   u4   -u7  u6   -u1  -1   -u3  u2",
    "u6   u7   u4   -u5  -u2  u3   -1   -u1",
    "u7   -u6  u5   u4   -u3  -u2  u1   -1",
)


def _parse_entry(token: str) -> tuple[int, int]:
    sign = -1 if token.startswith("-") else 1
    body = token.lstrip("+-")
    return sign, 0 if body == "1" else int(body[1:])


#: ``MUL_TABLE[i][j] == (sign, k)`` means ``mu_i * mu_j == sign * mu_k``.
MUL_TABLE: tuple[tuple[tuple[int, int], ...], ...] = tuple(
    tuple(_parse_entry(tok) for tok in row.split()) for row in _TABLE_ROWS
)

# Structure constants: (a b)_k = sum_ij a_i b_j STRUCTURE[i, j, k]
STRUCTURE = np.zeros((8, 8, 8))
for _i in range(8):
    for _j in range(8):
        _s, _k = MUL_TABLE[_i][_j]
        STRUCTURE[_i, _j, _k] = _s
_STRUCTURE_FLAT = STRUCTURE.reshape(64, 8)

CONJ_SIGNS = np.array([1.0, -1, -1, -1, -1, -1, -1, -1])


# ---------------------------------------------------------------------------
# array kernels


def oct_mul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Multiply broadcastable octonion arrays with shape ``(..., 8)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    outer = a[..., :, None] * b[..., None, :]
    return outer.reshape(outer.shape[:-2] + (64,)) @ _STRUCTURE_FLAT


def conj_array(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=float) * CONJ_SIGNS


def norm_sq_array(a: np.ndarray) -> np.ndarray:
    # The source text prints |o|^2 as a plain coefficient sum; the squares are
    # forced by |o| = sqrt(o conj(o)).
    a = np.asarray(a, dtype=float)
    return np.einsum("...i,...i->...", a, a)


def norm_array(a: np.ndarray) -> np.ndarray:
    return np.sqrt(norm_sq_array(a))


def embed_plane(z: np.ndarray, unit: int) -> np.ndarray:
    """Place complex values ``x + iy`` at ``x + y mu_unit``."""
    z = np.asarray(z)
    out = np.zeros(z.shape + (8,))
    out[..., 0] = z.real
    out[..., unit] = z.imag
    return out


def plane_part(o: np.ndarray, unit: int) -> np.ndarray:
    """Read the ``span{1, mu_unit}`` part of octonions as complex numbers."""
    o = np.asarray(o)
    return o[..., 0] + 1j * o[..., unit]


def right_mul_plane(v: np.ndarray, z: np.ndarray, unit: int) -> np.ndarray:
    """Compute ``v * (Re z + Im z mu_unit)`` for octonion array ``v``.

    Only the eight real coefficient planes of ``v`` and the real and
    imaginary parts of ``z`` are touched, so this is cheaper than a full
    product when the right factor lives in a single plane.
    """
    v = np.asarray(v, dtype=float)
    z = np.asarray(z)
    x, y = z.real, z.imag
    out = np.empty(np.broadcast_shapes(v.shape, z.shape + (8,)))
    for k in range(8):
        out[..., k] = v[..., k] * x
    for i in range(8):
        sign, k = MUL_TABLE[i][unit]
        out[..., k] += sign * v[..., i] * y
    return out


# ---------------------------------------------------------------------------
# scalar types


class Octonion:
    """An immutable octonion ``s0 + s1 mu1 + ... + s7 mu7``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[float] = (0.0,) * 8):
        c = np.array(list(coeffs), dtype=float)
        if c.shape != (8,):
            raise ParameterError(f"octonion needs 8 coefficients, got {c.shape}")
        c.setflags(write=False)
        self._c = c

    @classmethod
    def basis(cls, i: int) -> "Octonion":
        c = np.zeros(8)
        c[i] = 1.0
        return cls(c)

    @classmethod
    def real(cls, x: float) -> "Octonion":
        return cls((x, 0, 0, 0, 0, 0, 0, 0))

    @classmethod
    def from_pair(cls, a: "Quaternion", b: "Quaternion") -> "Octonion":
        """Build ``a + b mu4``."""
        return cls(tuple(a.coeffs) + tuple(b.coeffs))

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    def pair(self) -> tuple["Quaternion", "Quaternion"]:
        """Split into quaternions ``(a, b)`` with ``self == a + b mu4``."""
        return Quaternion(self._c[:4]), Quaternion(self._c[4:])

    def __getitem__(self, i: int) -> float:
        return float(self._c[i])

    def __iter__(self):
        return iter(self._c.tolist())

    def _coerce(self, other) -> np.ndarray | None:
        if isinstance(other, Octonion):
            return other._c
        if isinstance(other, Quaternion):
            return other.to_octonion()._c
        if isinstance(other, (int, float, np.floating, np.integer)):
            c = np.zeros(8)
            c[0] = other
            return c
        return None

    def __add__(self, other):
        c = self._coerce(other)
        return NotImplemented if c is None else Octonion(self._c + c)

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        return NotImplemented if c is None else Octonion(self._c - c)

    def __rsub__(self, other):
        c = self._coerce(other)
        return NotImplemented if c is None else Octonion(c - self._c)

    def __neg__(self):
        return Octonion(-self._c)

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Octonion(self._c * other)
        c = self._coerce(other)
        return NotImplemented if c is None else Octonion(oct_mul_array(self._c, c))

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Octonion(self._c * other)
        c = self._coerce(other)
        return NotImplemented if c is None else Octonion(oct_mul_array(c, self._c))

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Octonion(self._c / other)
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        # a / b = a conj(b) / |b|^2, well defined in a division algebra
        return Octonion(oct_mul_array(self._c, conj_array(c)) / float(norm_sq_array(c)))

    def __eq__(self, other):
        c = self._coerce(other)
        return NotImplemented if c is None else bool(np.array_equal(self._c, c))

    def __hash__(self):
        return hash(tuple(self._c.tolist()))

    def __abs__(self) -> float:
        return norm(self)

    def conj(self) -> "Octonion":
        return conj(self)

    def isclose(self, other, tol: float = 1e-12) -> bool:
        c = self._coerce(other)
        return bool(np.max(np.abs(self._c - c)) <= tol)

    def __repr__(self):
        terms = ", ".join(f"{x:.6g}" for x in self._c)
        return f"Octonion({terms})"


class Quaternion:
    """An immutable quaternion ``s0 + s1 mu1 + s2 mu2 + s3 mu3``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[float] = (0.0,) * 4):
        c = np.array(list(coeffs), dtype=float)
        if c.shape != (4,):
            raise ParameterError(f"quaternion needs 4 coefficients, got {c.shape}")
        c.setflags(write=False)
        self._c = c

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    def to_octonion(self) -> Octonion:
        return Octonion(tuple(self._c) + (0.0, 0.0, 0.0, 0.0))

    def conj(self) -> "Quaternion":
        return Quaternion(self._c * CONJ_SIGNS[:4])

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self._c * other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        # Hamilton product with i, j, k = mu1, mu2, mu3
        a0, a1, a2, a3 = self._c
        b0, b1, b2, b3 = other._c
        return Quaternion((
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ))

    def __add__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self._c + other._c)

    def __neg__(self):
        return Quaternion(-self._c)

    def __eq__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return bool(np.array_equal(self._c, other._c))

    def __hash__(self):
        return hash(tuple(self._c.tolist()))

    def __repr__(self):
        return "Quaternion({})".format(", ".join(f"{x:.6g}" for x in self._c))


MU = tuple(Octonion.basis(i) for i in range(8))
ONE = MU[0]


def oct_mul(a: Octonion, b: Octonion) -> Octonion:
    return Octonion(oct_mul_array(a.coeffs, b.coeffs))


def conj(o: Octonion) -> Octonion:
    return Octonion(conj_array(o.coeffs))


def norm_sq(o: Octonion) -> float:
    return float(norm_sq_array(o.coeffs))


def norm(o: Octonion) -> float:
    return math.sqrt(norm_sq(o))


def oct_exp_planar(mu: Octonion, theta: float) -> Octonion:
    """Return ``cos(theta) + mu sin(theta)`` for a unit ``mu`` with ``mu^2 = -1``."""
    residual = norm(oct_mul(mu, mu) + 1.0)
    if residual > 1e-9:
        raise ParameterError(f"exponent direction must square to -1 (|mu^2+1|={residual:.3g})")
    return math.cos(theta) + mu * math.sin(theta)


def oct_exp(o: Octonion) -> Octonion:
    """General exponential ``e^s0 (cos|v| + v/|v| sin|v|)`` with ``v`` the pure part."""
    s0 = o[0]
    v = o.coeffs.copy()
    v[0] = 0.0
    r = float(np.linalg.norm(v))
    scale = math.exp(s0)
    if r == 0.0:
        return Octonion.real(scale)
    c = v * (math.sin(r) / r)
    c[0] = math.cos(r)
    return Octonion(scale * c)


def quat_pair_residuals(a: Quaternion, b: Quaternion) -> list[float]:
    """Max-abs residuals of the six quaternion-pair identities.

    With ``A``, ``B`` the octonion embeddings of ``a``, ``b``:

    1. ``mu4 a == conj(a) mu4``
    2. ``mu4 (a mu4) == -conj(a)``
    3. ``(a mu4) mu4 == -a``
    4. ``a (b mu4) == (b a) mu4``
    5. ``(a mu4) b == (a conj(b)) mu4``
    6. ``(a mu4)(b mu4) == -conj(b) a``
    """
    return [float(r) for r in quat_pair_residuals_array(a.coeffs, b.coeffs)]


def quat_pair_residuals_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorised :func:`quat_pair_residuals` for quaternion arrays ``(..., 4)``.

    Returns an array ``(..., 6)`` of max-abs residuals, one per identity.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    zeros = np.zeros(a.shape[:-1] + (4,))
    A = np.concatenate([a, zeros], axis=-1)
    B = np.concatenate([b, np.zeros(b.shape[:-1] + (4,))], axis=-1)
    Ac, Bc = conj_array(A), conj_array(B)
    m4 = MU[4].coeffs
    a4 = oct_mul_array(A, m4)
    b4 = oct_mul_array(B, m4)
    pairs = (
        (oct_mul_array(m4, A), oct_mul_array(Ac, m4)),
        (oct_mul_array(m4, a4), -Ac),
        (oct_mul_array(a4, m4), -A),
        (oct_mul_array(A, b4), oct_mul_array(oct_mul_array(B, A), m4)),
        (oct_mul_array(a4, B), oct_mul_array(oct_mul_array(A, Bc), m4)),
        (oct_mul_array(a4, b4), -oct_mul_array(Bc, A)),
    )
    return np.stack([np.max(np.abs(lhs - rhs), axis=-1) for lhs, rhs in pairs], axis=-1)


def quat_pair_identities_check(a: Quaternion, b: Quaternion, tol: float = 1e-12) -> bool:
    scale = max(1.0, norm(a.to_octonion()) * max(1.0, norm(b.to_octonion())))
    return all(r <= tol * scale for r in quat_pair_residuals(a, b))


def quat_mul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of broadcastable quaternion arrays ``(..., 4)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ], axis=-1)
