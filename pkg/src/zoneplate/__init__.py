"""Design and wave-optics simulation of compound Fresnel zone plates for hard X-rays."""
from .errors import (ConfigError, ConsistencyError, DomainError, FabricationLimitError,
                     FormatError, RangeError, SamplingError, ValidationError, ZonePlateError)

__all__ = ["ConfigError", "ConsistencyError", "DomainError", "FabricationLimitError",
           "FormatError", "RangeError", "SamplingError", "ValidationError", "ZonePlateError"]
__version__ = "0.1.0"
