"""Cold-gas deorbit mission toolkit.

Hohmann deorbit planning, propellant sizing, conical nozzle design with
quasi-1D isentropic flow, thick-wall tank stress checks, two-body trajectory
simulation and coarse TLE conjunction screening.
"""

from coldgas.errors import (
    ConvergenceError,
    DesignInfeasibleError,
    DomainError,
    ReentryError,
    TleChecksumError,
    TleConsistencyError,
    TleFormatError,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DesignInfeasibleError",
    "DomainError",
    "ReentryError",
    "TleChecksumError",
    "TleConsistencyError",
    "TleFormatError",
    "__version__",
]
