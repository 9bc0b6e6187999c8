"""Exception hierarchy shared across the package.

Every error raised by library code derives from WavesatError so callers
(and the CLI exit-code mapping) can distinguish configuration mistakes,
numerical breakdowns and verification failures.
"""


class WavesatError(Exception):
    """Base class for all package errors."""


class ConfigError(WavesatError):
    """Invalid argument or configuration (CLI exit code 2)."""


class NumericalError(WavesatError):
    """A numerical procedure broke down (CLI exit code 3)."""


class VerificationError(WavesatError):
    """A certification or verification target failed (CLI exit code 4)."""


class OrderOutOfRange(ConfigError):
    """Requested filter order outside the supported range 1..45."""


class FactorizationFailure(NumericalError):
    """Spectral factorization residual exceeded tolerance."""


class OddLengthFilter(ConfigError):
    """Quadrature-mirror construction requires an even-length filter."""


class SupportMismatch(ConfigError):
    """Sampled support interval inconsistent with the filter length."""


class GridTooCoarse(ConfigError):
    """Grid level too low for a reliable derivative estimate."""


class TooManyZeros(NumericalError):
    """Zero detector exceeded its cap: tolerance too loose, or the
    function has no usable finite zero set."""


class SaturationFailure(NumericalError):
    """No translate reached the saturation lower bound (inconsistent
    eta, should not happen once positivity is certified)."""


class DimensionMismatch(ConfigError):
    """Coordinate list and translate list have different lengths."""


class HorizonOverflow(ConfigError):
    """Requested eager schedule materialization is too large."""


class WindowNotFound(VerificationError):
    """No window up to the block length covers every sample: plan bug."""


class PlanTooShort(ConfigError):
    """Schedule horizon does not cover the requested scale windows."""
