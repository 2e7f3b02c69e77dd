"""Fixture generation and field files.

A field file is a raw little-endian float64 payload with a JSON sidecar at
``<path>.json``. Octonion values are stored plane-major: all of coefficient
0, then all of coefficient 1, and so on.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import DataError, FormatError, ParameterError, ShapeError
from .lct1d import Grid1D, LCTParams
from .olct3d import OctonionField3D, RealField3D
from .stolct import StolctField, Window3D

FIELD_KINDS = ("gaussian", "chirped-gaussian", "box", "delta", "random-seeded")
FORMAT_TAG = "octolct-field"


def _radius_sq(grids: Sequence[Grid1D], center=(0.0, 0.0, 0.0)) -> np.ndarray:
    x = np.meshgrid(*[g.coords - c for g, c in zip(grids, center)], indexing="ij")
    return x[0] ** 2 + x[1] ** 2 + x[2] ** 2


def generate(kind: str, grids: Sequence[Grid1D], params: dict | None = None) -> RealField3D:
    """Build a deterministic test field.

    Parameters
    ----------
    kind : str
        One of ``gaussian`` (``exp(-|x - center|^2 / (2 sigma^2))``),
        ``chirped-gaussian`` (the same envelope times ``cos(chirp |x|^2)``),
        ``box`` (1 where every ``|x_k| <= radius``), ``delta`` (``1/dV`` on
        the origin cell) or ``random-seeded`` (standard normal samples).
    grids : sequence of Grid1D
    params : dict, optional
        ``sigma``, ``center``, ``chirp``, ``radius``, ``seed``.
    """
    params = dict(params or {})
    grids = tuple(grids)
    if len(grids) != 3:
        raise ShapeError("need three grids")
    if kind == "gaussian":
        sigma = float(params.get("sigma", 1.0))
        if sigma <= 0:
            raise ParameterError("sigma must be positive")
        values = np.exp(-_radius_sq(grids, params.get("center", (0.0, 0.0, 0.0))) / (2 * sigma**2))
    elif kind == "chirped-gaussian":
        sigma = float(params.get("sigma", 1.0))
        chirp = float(params.get("chirp", 0.5))
        if sigma <= 0:
            raise ParameterError("sigma must be positive")
        r2 = _radius_sq(grids, params.get("center", (0.0, 0.0, 0.0)))
        values = np.exp(-r2 / (2 * sigma**2)) * np.cos(chirp * r2)
    elif kind == "box":
        radius = float(params.get("radius", 1.0))
        x = np.meshgrid(*[g.coords for g in grids], indexing="ij")
        inside = np.ones(x[0].shape, dtype=bool)
        for xk in x:
            inside &= np.abs(xk) <= radius + 1e-12
        values = inside.astype(float)
    elif kind == "delta":
        if not all(g.has_origin for g in grids):
            raise ShapeError("delta needs an odd lattice with a sample at the origin")
        values = np.zeros(tuple(g.n for g in grids))
        values[tuple(g.n // 2 for g in grids)] = 1.0 / float(np.prod([g.step for g in grids]))
    elif kind == "random-seeded":
        seed = int(params.get("seed", 0))
        values = np.random.default_rng(seed).standard_normal(tuple(g.n for g in grids))
    else:
        raise ParameterError(f"unknown field kind {kind!r}; choose from {', '.join(FIELD_KINDS)}")
    return RealField3D(values, grids)


def parse_window(spec: str, grids: Sequence[Grid1D]) -> Window3D:
    """Window from ``gaussian:sigma``, ``box:radius`` or ``file:path``."""
    kind, _, arg = spec.partition(":")
    if not arg:
        raise ParameterError(f"window spec {spec!r} needs an argument after ':'")
    if kind == "gaussian":
        f = generate("gaussian", grids, {"sigma": _positive(arg)})
    elif kind == "box":
        f = generate("box", grids, {"radius": _positive(arg)})
    elif kind == "file":
        f = read_field(arg)
        if not isinstance(f, RealField3D):
            raise ParameterError("window file must hold a real field")
        if tuple(f.grids) != tuple(grids):
            raise ShapeError("window file lattice differs from the signal lattice")
    else:
        raise ParameterError(f"unknown window kind {kind!r}")
    return Window3D.from_field(f)


def _positive(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParameterError(f"expected a number, got {text!r}") from None
    if not (value > 0 and math.isfinite(value)):
        raise ParameterError(f"expected a positive number, got {text!r}")
    return value


# ---------------------------------------------------------------------------
# file format


@dataclass
class FieldHeader:
    shape: list[int]
    steps: list[float]
    offsets: list[float]
    dtype: str = "real64"
    order: str = "C"
    kind: str = "real"
    ushape: list[int] | None = None
    usteps: list[float] | None = None
    uoffsets: list[float] | None = None
    seed: int | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def value_count(self) -> int:
        n = int(np.prod(self.shape))
        if self.ushape is not None:
            n *= int(np.prod(self.ushape))
        return n * (8 if self.dtype == "octonion64x8" else 1)

    def to_json(self) -> str:
        data = {"format": FORMAT_TAG, "version": 1}
        data.update({k: v for k, v in asdict(self).items() if v is not None})
        return json.dumps(data, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "FieldHeader":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"header is not valid JSON: {exc}") from None
        if not isinstance(data, dict) or data.pop("format", None) != FORMAT_TAG:
            raise FormatError("not a field header")
        data.pop("version", None)
        try:
            header = cls(**data)
        except TypeError as exc:
            raise FormatError(f"bad header: {exc}") from None
        header.validate()
        return header

    def validate(self) -> None:
        if self.dtype not in ("real64", "octonion64x8"):
            raise FormatError(f"unknown dtype {self.dtype!r}")
        if self.kind not in ("real", "octonion", "stolct"):
            raise FormatError(f"unknown kind {self.kind!r}")
        for name in ("shape", "steps", "offsets"):
            if len(getattr(self, name)) != 3:
                raise FormatError(f"{name} must have three entries")
        if self.kind == "stolct":
            if self.ushape is None or self.usteps is None or self.uoffsets is None:
                raise FormatError("stolct header needs ushape, usteps and uoffsets")
        _check_centered(self.shape, self.steps, self.offsets)
        if self.ushape is not None:
            _check_centered(self.ushape, self.usteps, self.uoffsets)

    def grids(self) -> tuple[Grid1D, Grid1D, Grid1D]:
        return tuple(Grid1D(n, s) for n, s in zip(self.shape, self.steps))  # type: ignore[return-value]

    def ugrids(self) -> tuple[Grid1D, Grid1D, Grid1D]:
        return tuple(Grid1D(n, s) for n, s in zip(self.ushape, self.usteps))  # type: ignore[return-value]


def _check_centered(shape, steps, offsets) -> None:
    for n, s, o in zip(shape, steps, offsets):
        if int(n) != n or n < 1 or not s > 0:
            raise FormatError(f"bad lattice entry n={n}, step={s}")
        expect = -(n - 1) / 2 * s
        if abs(o - expect) > 1e-9 * max(1.0, abs(expect)):
            raise ShapeError(f"offset {o} is not centered (expected {expect})")


def _lattice(grids) -> tuple[list[int], list[float], list[float]]:
    return [g.n for g in grids], [g.step for g in grids], [g.offset for g in grids]


def _sidecar(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def write_field(f, path, seed: int | None = None, extra: dict | None = None) -> FieldHeader:
    """Write a real, octonion or short-time field and its sidecar header."""
    path = Path(path)
    if isinstance(f, RealField3D):
        header = FieldHeader(*_lattice(f.grids), dtype="real64", kind="real")
        payload = f.samples
    elif isinstance(f, OctonionField3D):
        header = FieldHeader(*_lattice(f.wgrids), dtype="octonion64x8", kind="octonion")
        payload = np.moveaxis(f.samples, -1, 0)
    elif isinstance(f, StolctField):
        shape, steps, offsets = _lattice(f.wgrids)
        ushape, usteps, uoffsets = _lattice(f.ugrids)
        header = FieldHeader(shape, steps, offsets, dtype="octonion64x8", kind="stolct",
                             ushape=ushape, usteps=usteps, uoffsets=uoffsets)
        payload = np.moveaxis(f.samples, -1, 0)
    else:
        raise ParameterError(f"cannot write {type(f).__name__}")
    if not np.all(np.isfinite(payload)):
        raise DataError("refusing to write non-finite values")
    header.seed = seed
    header.extra = dict(extra or {})
    path.write_bytes(np.ascontiguousarray(payload, dtype="<f8").tobytes())
    _sidecar(path).write_text(header.to_json())
    return header


def read_header(path) -> FieldHeader:
    side = _sidecar(Path(path))
    if not side.exists():
        raise FormatError(f"missing header {side}")
    return FieldHeader.from_json(side.read_text())


def read_field(path):
    """Read a field written by :func:`write_field`."""
    path = Path(path)
    header = read_header(path)
    raw = path.read_bytes()
    if len(raw) != header.value_count * 8:
        raise FormatError(f"payload has {len(raw)} bytes, header implies {header.value_count * 8}")
    data = np.frombuffer(raw, dtype="<f8").astype(float)
    if not np.all(np.isfinite(data)):
        raise DataError("payload contains NaN or Inf")
    if header.kind == "real":
        if header.dtype != "real64":
            raise FormatError("real field must use real64")
        return RealField3D(data.reshape(header.shape), header.grids())
    if header.dtype != "octonion64x8":
        raise FormatError("octonion fields must use octonion64x8")
    if header.kind == "octonion":
        return OctonionField3D(np.moveaxis(data.reshape([8] + header.shape), 0, -1), header.grids())
    planes = data.reshape([8] + list(header.ushape) + header.shape)
    return StolctField(np.moveaxis(planes, 0, -1), header.grids(), header.ugrids())


# ---------------------------------------------------------------------------
# job configuration


@dataclass(frozen=True)
class JobConfig:
    matrices: tuple[LCTParams, LCTParams, LCTParams]
    window: str = "gaussian:1"
    ugrid_stride: int = 1
    path: str = "fast"
    tol: float = 1e-9
    outputs: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.matrices) != 3 or not all(isinstance(m, LCTParams) for m in self.matrices):
            raise ParameterError("need three LCTParams")
        if self.path not in ("fast", "direct"):
            raise ParameterError(f"unknown path {self.path!r}")
        if int(self.ugrid_stride) != self.ugrid_stride or self.ugrid_stride < 1:
            raise ParameterError("u-grid stride must be a positive integer")
        if not self.tol > 0:
            raise ParameterError("tolerance must be positive")

    @classmethod
    def from_strings(cls, matrices: Sequence[str], **kwargs) -> "JobConfig":
        return cls(tuple(LCTParams.parse(m) for m in matrices), **kwargs)

    def to_dict(self) -> dict:
        return {
            "matrices": [m.as_tuple() for m in self.matrices],
            "window": self.window,
            "ugrid_stride": self.ugrid_stride,
            "path": self.path,
            "tol": self.tol,
            "outputs": list(self.outputs),
        }
