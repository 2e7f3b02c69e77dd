"""Exception types raised across the package."""


class OctolctError(Exception):
    """Base class for all package errors."""


class ParameterError(OctolctError, ValueError):
    """Invalid transform parameter, exponent, window or fixture kind."""


class ShapeError(OctolctError, ValueError):
    """Array shapes or grids do not line up."""


class FormatError(OctolctError):
    """Field file header and payload disagree."""


class DataError(OctolctError, ValueError):
    """Field payload contains non-finite values."""


class ResourceError(OctolctError):
    """Requested computation exceeds the configured guard rail."""
