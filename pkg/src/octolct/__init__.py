"""Octonion linear canonical transforms of real 3D signals and their windowed form."""

from .errors import DataError, FormatError, OctolctError, ParameterError, ResourceError, ShapeError
from .lct1d import Grid1D, LCTParams, lct1d, lct1d_chirp_fft, lct1d_direct, lct1d_inverse
from .octonion import MU, Octonion, Quaternion
from .olct3d import (
    OctonionField3D,
    RealField3D,
    lct3d,
    olct,
    olct_direct,
    olct_from_lct3d,
    olct_inverse,
    olct_parity_components,
    olct_separable,
    parity_split,
)
from .stolct import (
    StolctField,
    Window3D,
    qstlct_2d,
    stlct3d,
    stolct,
    stolct_forward,
    stolct_from_stlct3d,
    stolct_parity_components,
    stolct_reconstruct,
    stolct_via_olct,
)

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "FormatError",
    "OctolctError",
    "ParameterError",
    "ResourceError",
    "ShapeError",
    "Grid1D",
    "LCTParams",
    "lct1d",
    "lct1d_chirp_fft",
    "lct1d_direct",
    "lct1d_inverse",
    "MU",
    "Octonion",
    "Quaternion",
    "OctonionField3D",
    "RealField3D",
    "lct3d",
    "olct",
    "olct_direct",
    "olct_from_lct3d",
    "olct_inverse",
    "olct_parity_components",
    "olct_separable",
    "parity_split",
    "StolctField",
    "Window3D",
    "qstlct_2d",
    "stlct3d",
    "stolct",
    "stolct_forward",
    "stolct_from_stlct3d",
    "stolct_parity_components",
    "stolct_reconstruct",
    "stolct_via_olct",
]
