"""Closed-form orbital mechanics for coplanar circular-orbit transfers.

All quantities are SI: metres, seconds, kilograms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from coldgas.errors import DomainError

MU_EARTH = 3.986e14  # m^3/s^2
R_EARTH = 6_370_000.0  # m, mean radius used for altitudes


@dataclass(frozen=True)
class Body:
    mu: float = MU_EARTH
    radius: float = R_EARTH

    def __post_init__(self):
        if not self.mu > 0:
            raise DomainError(f"mu must be positive, got {self.mu}")
        if not self.radius > 0:
            raise DomainError(f"radius must be positive, got {self.radius}")


EARTH = Body()


@dataclass(frozen=True)
class CircularOrbit:
    r: float
    body: Body = EARTH

    def __post_init__(self):
        if not self.r > self.body.radius:
            raise DomainError(
                f"orbit radius {self.r} m is inside the body (radius {self.body.radius} m)"
            )

    @classmethod
    def from_altitude(cls, altitude: float, body: Body = EARTH) -> CircularOrbit:
        return cls(body.radius + altitude, body)

    @property
    def altitude(self) -> float:
        return self.r - self.body.radius

    @property
    def speed(self) -> float:
        return circular_velocity(self.r, self.body.mu)

    @property
    def period(self) -> float:
        return 2.0 * math.pi * math.sqrt(self.r**3 / self.body.mu)


@dataclass(frozen=True)
class HohmannPlan:
    """Every derived quantity of a two-impulse circular-to-circular transfer.

    Speeds are magnitudes. ``dv1`` is applied at ``r1`` and ``dv2`` at ``r2``;
    both are non-negative, the burn direction follows from ``is_descent``.
    """

    r1: float
    r2: float
    mu: float
    a_transfer: float
    eps_transfer: float
    eps_orbit1: float
    eps_orbit2: float
    v_orbit1: float
    v_orbit2: float
    v_t1: float
    v_t2: float
    dv1: float
    dv2: float
    dv_total: float
    tof: float

    @property
    def is_descent(self) -> bool:
        return self.r1 > self.r2

    @property
    def burn_sign(self) -> float:
        """-1 for retrograde (descent) burns, +1 for prograde."""
        return -1.0 if self.is_descent else 1.0


@dataclass(frozen=True)
class PropellantBudget:
    dv: float
    u_eq: float
    mass_ratio: float
    m_initial: float
    m_final: float
    m_propellant: float


def _vis_viva(r: float, eps: float, mu: float) -> float:
    # v = sqrt(2 (mu/r + eps)); clamp roundoff below zero at apoapsis of bound limits
    return math.sqrt(max(2.0 * (mu / r + eps), 0.0))


def circular_velocity(r: float, mu: float = MU_EARTH) -> float:
    """Speed of a circular orbit of radius ``r``, ``sqrt(mu/r)``."""
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r}")
    if not mu > 0:
        raise DomainError(f"mu must be positive, got {mu}")
    return math.sqrt(mu / r)


def specific_energy(a: float, mu: float = MU_EARTH) -> float:
    """Specific mechanical energy ``-mu / (2a)`` of an orbit with semi-major axis ``a``."""
    if a == 0:
        raise DomainError("semi-major axis must be non-zero")
    if not mu > 0:
        raise DomainError(f"mu must be positive, got {mu}")
    return -mu / (2.0 * a)


def plan_hohmann(r1: float, r2: float, mu: float = MU_EARTH) -> HohmannPlan:
    """Plan a Hohmann transfer from circular radius ``r1`` to ``r2``.

    Works for descent (``r1 > r2``) and ascent. When ``r1 == r2`` both burns
    vanish and ``tof`` is half the circular period.

    Raises:
        DomainError: if either radius or ``mu`` is not positive.
    """
    if not (r1 > 0 and r2 > 0):
        raise DomainError(f"radii must be positive, got r1={r1}, r2={r2}")
    if not mu > 0:
        raise DomainError(f"mu must be positive, got {mu}")

    a_t = 0.5 * (r1 + r2)
    eps_t = specific_energy(a_t, mu)
    eps_1 = specific_energy(r1, mu)
    eps_2 = specific_energy(r2, mu)

    v_1 = _vis_viva(r1, eps_1, mu)
    v_2 = _vis_viva(r2, eps_2, mu)
    v_t1 = _vis_viva(r1, eps_t, mu)
    v_t2 = _vis_viva(r2, eps_t, mu)

    dv1 = abs(v_t1 - v_1)
    dv2 = abs(v_t2 - v_2)
    return HohmannPlan(
        r1=r1,
        r2=r2,
        mu=mu,
        a_transfer=a_t,
        eps_transfer=eps_t,
        eps_orbit1=eps_1,
        eps_orbit2=eps_2,
        v_orbit1=v_1,
        v_orbit2=v_2,
        v_t1=v_t1,
        v_t2=v_t2,
        dv1=dv1,
        dv2=dv2,
        dv_total=dv1 + dv2,
        tof=math.pi * math.sqrt(a_t**3 / mu),
    )


def size_propellant(dv: float, u_eq: float, m_initial: float) -> PropellantBudget:
    """Propellant needed for ``dv`` from the ideal rocket equation.

    ``m_initial`` is the wet mass before the burn; ``u_eq`` the effective
    exhaust velocity (thrust over mass flow).
    """
    if not u_eq > 0:
        raise DomainError(f"effective exhaust velocity must be positive, got {u_eq}")
    if dv < 0:
        raise DomainError(f"dv must be non-negative, got {dv}")
    if not m_initial > 0:
        raise DomainError(f"initial mass must be positive, got {m_initial}")
    ratio = math.exp(dv / u_eq)
    m_final = m_initial / ratio
    return PropellantBudget(
        dv=dv,
        u_eq=u_eq,
        mass_ratio=ratio,
        m_initial=m_initial,
        m_final=m_final,
        m_propellant=m_initial - m_final,
    )
