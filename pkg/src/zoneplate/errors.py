"""Exception hierarchy. The CLI maps each family to an exit code."""


class ZonePlateError(Exception):
    """Base class for all package errors."""


class ConfigError(ZonePlateError):
    """Malformed or incomplete run configuration."""


class FormatError(ZonePlateError, ValueError):
    """Malformed input file (optical-constants table, zone table)."""


class DomainError(ZonePlateError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(DomainError):
    """Query outside a tabulated or sampled range."""


class ValidationError(DomainError):
    """Order pair or plan rejected by the design rules."""


class ConsistencyError(DomainError):
    """Inputs that disagree with each other (e.g. energy mismatch)."""


class SamplingError(ZonePlateError):
    """Grid too coarse to resolve the structure or the diffraction pattern."""


class FabricationLimitError(ZonePlateError):
    """A zone narrower than the minimum printable feature was requested."""
