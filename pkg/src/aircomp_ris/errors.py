"""Exception types shared across the package."""


class AirCompError(Exception):
    """Base class for all package-specific errors."""


class InvalidDimension(AirCompError):
    """A vector length or count is outside its valid range."""


class DimensionMismatch(AirCompError):
    """Two operands that must share a length do not."""


class NoUncertainty(AirCompError):
    """A robust-step computation was requested with eps = 0; the caller
    must bypass the robust step instead."""


class InvalidNoise(AirCompError):
    """The cube-root scaling update has no finite root at zero noise."""


class AllZeroScalers(AirCompError):
    """Every effective transmit scalar is zero; m and t_k cannot be recovered."""


class PerturbationOutOfBall(AirCompError):
    """A supplied CSI perturbation exceeds its uncertainty radius."""


class ConfigError(AirCompError):
    """A run configuration file failed schema validation."""
