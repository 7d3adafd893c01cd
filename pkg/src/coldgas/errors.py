"""Exception hierarchy shared by all modules."""


class DomainError(ValueError):
    """An input lies outside the domain of the requested operation."""


class DesignInfeasibleError(DomainError):
    """The requested design cannot be realized with the given inputs."""


class ConvergenceError(ArithmeticError):
    """An iterative solver failed to converge."""


class ReentryError(RuntimeError):
    """Propagation crossed the body surface.

    ``ephemeris`` holds the samples computed before the crossing.
    """

    def __init__(self, message, ephemeris=None):
        super().__init__(message)
        self.ephemeris = ephemeris


class TleFormatError(ValueError):
    """A two-line element set does not match the fixed-column layout."""


class TleChecksumError(TleFormatError):
    def __init__(self, line_number, expected, found):
        super().__init__(
            f"TLE line {line_number} checksum mismatch: "
            f"computed {expected}, found {found}"
        )
        self.line_number = line_number


class TleConsistencyError(TleFormatError):
    """Line 1 and line 2 disagree (e.g. catalog number)."""
