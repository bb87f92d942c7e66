"""
Error types for the limit amplituhedron toolkit
Every failure raised by the library derives from AmplituhedronError
"""


class AmplituhedronError(Exception):
    """Base class for all library errors"""


class DomainError(AmplituhedronError):
    """Operation undefined for the given input (e.g. gcd of two zero polynomials)"""


class DimensionError(AmplituhedronError):
    """Shapes or sizes do not fit the ambient space"""


class DegenerateInputError(AmplituhedronError):
    """Matrix does not have the rank the operation needs"""


class ParameterError(AmplituhedronError):
    """Integer parameters out of their admissible range"""


class MapUndefinedError(AmplituhedronError):
    """The amplituhedron map drops rank on this point"""


class RootIsolationError(AmplituhedronError):
    """Sturm count and isolated intervals disagree"""


class RetryCapExceeded(AmplituhedronError):
    """A rejection sampler used up its retry budget"""


class PoleError(AmplituhedronError):
    """Canonical form evaluated on one of its poles"""

    def __init__(self, factor: str, message: str = ""):
        self.factor = factor
        super().__init__(message or f"canonical form has a pole here ({factor} factor vanishes)")


class InputParseError(AmplituhedronError):
    """Plane input file could not be parsed"""
