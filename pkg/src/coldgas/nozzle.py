"""Isentropic flow relations and conical converging-diverging nozzle design.

The flow model is quasi-one-dimensional, inviscid and shock-free: subsonic
upstream of the throat, sonic at the throat, supersonic downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from coldgas.errors import ConvergenceError, DesignInfeasibleError, DomainError

BAR = 1.0e5  # Pa

SUBSONIC = "subsonic"
SUPERSONIC = "supersonic"

# bisection brackets for the area-Mach inversion
_SUBSONIC_BRACKET = (1e-6, 1.0)
_SUPERSONIC_BRACKET = (1.0, 50.0)
AREA_RATIO_TOL = 1e-10
MAX_ITER = 200


@dataclass(frozen=True)
class GasModel:
    gamma: float = 1.4
    r_specific: float = 287.0  # J/(kg K)
    name: str = "dry air"

    def __post_init__(self):
        if not self.gamma > 1:
            raise DomainError(f"gamma must exceed 1, got {self.gamma}")
        if not self.r_specific > 0:
            raise DomainError(f"specific gas constant must be positive, got {self.r_specific}")

    @property
    def critical_pressure_ratio(self) -> float:
        """Stagnation-to-static pressure ratio at Mach 1."""
        g = self.gamma
        return ((g + 1) / 2) ** (g / (g - 1))


AIR = GasModel()


@dataclass(frozen=True)
class ChamberState:
    p0: float = 1.0 * BAR
    t0: float = 290.0
    gas: GasModel = AIR

    def __post_init__(self):
        if not self.p0 > 0:
            raise DomainError(f"chamber pressure must be positive, got {self.p0}")
        if not self.t0 > 0:
            raise DomainError(f"chamber temperature must be positive, got {self.t0}")


@dataclass(frozen=True)
class NozzleGeometry:
    """Conical C-D nozzle. Axial coordinate x starts at the inlet plane."""

    d_inlet: float
    d_throat: float
    d_exit: float
    len_convergent: float
    len_divergent: float
    half_angle_divergent: float
    half_angle_convergent: float

    def __post_init__(self):
        if not (self.d_throat > 0 and self.d_inlet > self.d_throat and self.d_exit >= self.d_throat):
            raise DomainError(
                "nozzle needs d_inlet > d_throat > 0 and d_exit >= d_throat, got "
                f"{self.d_inlet}, {self.d_throat}, {self.d_exit}"
            )
        if not (self.len_convergent > 0 and self.len_divergent >= 0):
            raise DomainError("nozzle section lengths must be positive")

    @property
    def a_throat(self) -> float:
        return math.pi * self.d_throat**2 / 4

    @property
    def a_inlet(self) -> float:
        return math.pi * self.d_inlet**2 / 4

    @property
    def a_exit(self) -> float:
        return math.pi * self.d_exit**2 / 4

    @property
    def x_throat(self) -> float:
        return self.len_convergent

    @property
    def length(self) -> float:
        return self.len_convergent + self.len_divergent

    @property
    def expansion_ratio(self) -> float:
        return (self.d_exit / self.d_throat) ** 2

    def diameter_at(self, x: float) -> float:
        if x < 0 or x > self.length * (1 + 1e-12):
            raise DomainError(f"x={x} m lies outside the nozzle [0, {self.length}]")
        if x <= self.len_convergent:
            frac = x / self.len_convergent
            return self.d_inlet + (self.d_throat - self.d_inlet) * frac
        frac = (x - self.len_convergent) / self.len_divergent
        return self.d_throat + (self.d_exit - self.d_throat) * min(frac, 1.0)

    def area_at(self, x: float) -> float:
        return math.pi * self.diameter_at(x) ** 2 / 4


@dataclass(frozen=True)
class FlowStation:
    x: float
    area: float
    mach: float
    p: float
    t: float
    v: float


@dataclass(frozen=True)
class NozzlePerformance:
    mdot: float
    mach_exit: float
    p_exit: float
    t_exit: float
    v_exit: float
    thrust: float
    u_eq: float


class IsentropicRatios(NamedTuple):
    t0_over_t: float
    p0_over_p: float
    a_over_astar: float


def _area_ratio(mach: float, gamma: float) -> float:
    if mach == 1.0:
        return 1.0
    if mach == 0.0:
        return math.inf
    t_ratio = 1 + 0.5 * (gamma - 1) * mach * mach
    expo = (gamma + 1) / (2 * (gamma - 1))
    return (2 / (gamma + 1) * t_ratio) ** expo / mach


def isentropic_ratios(mach: float, gamma: float = 1.4) -> IsentropicRatios:
    """Stagnation-to-static temperature and pressure ratios and A/A* at ``mach``.

    ``a_over_astar`` is ``inf`` at Mach 0.
    """
    if mach < 0:
        raise DomainError(f"Mach number must be non-negative, got {mach}")
    if not gamma > 1:
        raise DomainError(f"gamma must exceed 1, got {gamma}")
    t_ratio = 1 + 0.5 * (gamma - 1) * mach * mach
    return IsentropicRatios(
        t0_over_t=t_ratio,
        p0_over_p=t_ratio ** (gamma / (gamma - 1)),
        a_over_astar=_area_ratio(mach, gamma),
    )


def mach_from_pressure_ratio(p0_over_p: float, gamma: float = 1.4) -> float:
    if p0_over_p < 1:
        raise DomainError(f"stagnation/static pressure ratio must be >= 1, got {p0_over_p}")
    # expm1/log1p keep precision as the ratio approaches 1
    excess = math.expm1((gamma - 1) / gamma * math.log1p(p0_over_p - 1))
    return math.sqrt(2 / (gamma - 1) * excess)


def mach_from_area_ratio(a_over_astar: float, branch: str = SUPERSONIC, gamma: float = 1.4) -> float:
    """Invert the area-Mach relation on the requested branch by bisection.

    Bisection runs until the bracket collapses to machine resolution, which
    leaves the area-ratio residual well under ``AREA_RATIO_TOL``.

    Raises:
        DomainError: ``a_over_astar < 1``, unknown branch, or a target outside
            the bracket.
        ConvergenceError: residual still above tolerance after ``MAX_ITER``.
    """
    if a_over_astar < 1:
        raise DomainError(f"area ratio must be >= 1, got {a_over_astar}")
    if branch == SUBSONIC:
        lo, hi = _SUBSONIC_BRACKET
        # A/A* falls with M on the subsonic branch
        sign = -1.0
    elif branch == SUPERSONIC:
        lo, hi = _SUPERSONIC_BRACKET
        sign = 1.0
    else:
        raise DomainError(f"branch must be {SUBSONIC!r} or {SUPERSONIC!r}, got {branch!r}")
    if a_over_astar == 1.0:
        return 1.0

    def f(m):
        return sign * (_area_ratio(m, gamma) - a_over_astar)

    if f(hi) < 0:
        raise DomainError(f"area ratio {a_over_astar} outside the {branch} bracket")
    if f(lo) > 0:
        raise DomainError(f"area ratio {a_over_astar} outside the {branch} bracket")

    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    mach = 0.5 * (lo + hi)
    if abs(_area_ratio(mach, gamma) - a_over_astar) > AREA_RATIO_TOL * max(1.0, a_over_astar):
        raise ConvergenceError(f"area-Mach inversion did not converge for {a_over_astar}")
    return mach


def design_nozzle(
    chamber: ChamberState,
    p_ambient: float,
    d_throat: float,
    d_inlet: float,
    half_angle_divergent: float,
    half_angle_convergent: float,
) -> NozzleGeometry:
    """Size a conical nozzle that expands ``chamber`` exactly to ``p_ambient``.

    Angles are in radians. A pressure ratio equal to the critical ratio (to
    the 1e-4 relative resolution of a four-digit tabulated value) yields a
    sonic exit, ``d_exit == d_throat``.

    Raises:
        DesignInfeasibleError: the pressure ratio cannot reach Mach 1.
    """
    if not p_ambient > 0:
        raise DomainError(f"ambient pressure must be positive for a design point, got {p_ambient}")
    if not (d_throat > 0 and d_inlet > 0):
        raise DomainError("diameters must be positive")
    if not (0 < half_angle_divergent < math.pi / 2 and 0 < half_angle_convergent < math.pi / 2):
        raise DomainError("half-angles must lie in (0, pi/2) rad")

    gas = chamber.gas
    ratio = chamber.p0 / p_ambient
    critical = gas.critical_pressure_ratio
    if ratio < critical * (1 - 1e-4):
        raise DesignInfeasibleError(
            f"pressure ratio {ratio:.5g} is below the critical ratio {critical:.5g}; "
            "no supersonic exit possible"
        )
    mach_exit = max(mach_from_pressure_ratio(max(ratio, 1.0), gas.gamma), 1.0)
    d_exit = d_throat * math.sqrt(_area_ratio(mach_exit, gas.gamma))

    r_t = d_throat / 2
    return NozzleGeometry(
        d_inlet=d_inlet,
        d_throat=d_throat,
        d_exit=d_exit,
        len_convergent=(d_inlet / 2 - r_t) / math.tan(half_angle_convergent),
        len_divergent=(d_exit / 2 - r_t) / math.tan(half_angle_divergent),
        half_angle_divergent=half_angle_divergent,
        half_angle_convergent=half_angle_convergent,
    )


def convergent_half_angle(d_inlet: float, d_throat: float, len_convergent: float) -> float:
    """Half-angle that gives a conical convergent section of the stated length."""
    if not len_convergent > 0:
        raise DomainError("convergent length must be positive")
    return math.atan((d_inlet - d_throat) / 2 / len_convergent)


def _station(x: float, area: float, mach: float, chamber: ChamberState) -> FlowStation:
    gas = chamber.gas
    ratios = isentropic_ratios(mach, gas.gamma)
    t = chamber.t0 / ratios.t0_over_t
    return FlowStation(
        x=x,
        area=area,
        mach=mach,
        p=chamber.p0 / ratios.p0_over_p,
        t=t,
        v=mach * math.sqrt(gas.gamma * gas.r_specific * t),
    )


def _sample_positions(geom: NozzleGeometry, n_samples: int) -> list[float]:
    # the throat is always a sample; remaining points split by section length
    total = geom.length
    n_conv = min(max(2, round(n_samples * geom.len_convergent / total)), n_samples - 1)
    n_div = n_samples - n_conv + 1
    xs = [geom.len_convergent * i / (n_conv - 1) for i in range(n_conv)]
    xs += [geom.len_convergent + geom.len_divergent * i / (n_div - 1) for i in range(1, n_div)]
    xs[n_conv - 1] = geom.x_throat
    xs[-1] = total
    return xs


def quasi1d_profile(geom: NozzleGeometry, chamber: ChamberState, n_samples: int = 101) -> list[FlowStation]:
    """Axial flow solution of a started, shock-free nozzle.

    Returns ``n_samples`` stations from inlet to exit; one lies exactly on
    the throat with Mach 1.
    """
    if n_samples < 3:
        raise DomainError(f"need at least 3 samples, got {n_samples}")
    if geom.len_divergent <= 0:
        raise DomainError("profile needs a divergent section of positive length")
    gamma = chamber.gas.gamma
    stations = []
    for x in _sample_positions(geom, n_samples):
        area = geom.area_at(x)
        if x == geom.x_throat:
            mach = 1.0
        else:
            branch = SUBSONIC if x < geom.x_throat else SUPERSONIC
            mach = mach_from_area_ratio(area / geom.a_throat, branch, gamma)
        stations.append(_station(x, area, mach, chamber))
    return stations


def choked_mass_flow(a_throat: float, chamber: ChamberState) -> float:
    g = chamber.gas.gamma
    r = chamber.gas.r_specific
    return chamber.p0 * a_throat * math.sqrt(g / (r * chamber.t0)) * (2 / (g + 1)) ** ((g + 1) / (2 * (g - 1)))


def performance(geom: NozzleGeometry, chamber: ChamberState, p_ambient: float) -> NozzlePerformance:
    """Choked mass flow, exit state and thrust of a started nozzle.

    Raises:
        DomainError: the chamber/ambient ratio is below critical (unstarted).
    """
    if p_ambient < 0:
        raise DomainError(f"ambient pressure must be non-negative, got {p_ambient}")
    gas = chamber.gas
    if p_ambient > 0 and chamber.p0 / p_ambient < gas.critical_pressure_ratio * (1 - 1e-4):
        raise DomainError(
            f"nozzle unstarted: p0/p_ambient={chamber.p0 / p_ambient:.5g} "
            f"< critical {gas.critical_pressure_ratio:.5g}"
        )
    mdot = choked_mass_flow(geom.a_throat, chamber)
    mach_e = mach_from_area_ratio(geom.expansion_ratio, SUPERSONIC, gas.gamma)
    exit_ = _station(geom.length, geom.a_exit, mach_e, chamber)
    thrust = mdot * exit_.v + (exit_.p - p_ambient) * geom.a_exit
    return NozzlePerformance(
        mdot=mdot,
        mach_exit=mach_e,
        p_exit=exit_.p,
        t_exit=exit_.t,
        v_exit=exit_.v,
        thrust=thrust,
        u_eq=thrust / mdot,
    )
