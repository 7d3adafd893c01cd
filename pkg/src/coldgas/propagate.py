"""Fixed-step two-body propagation, impulsive burns and the two-burn deorbit run.

The integrator works on plain floats; an RK4 step costs a few microseconds,
so a full 600 km -> 400 km simulation at 1 s resolution runs in well under a
second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from coldgas.astro import EARTH, Body, HohmannPlan, plan_hohmann
from coldgas.errors import DomainError, ReentryError
from coldgas.kepler import KeplerElements, state_to_elements

EARTH_ROTATION_RATE = 7.2921159e-5  # rad/s
PERIAPSIS_TIME_TOL = 1e-3  # s


@dataclass(frozen=True)
class StateVector:
    t: float
    position: np.ndarray
    velocity: np.ndarray

    @classmethod
    def of(cls, t, position, velocity) -> StateVector:
        return cls(float(t), np.asarray(position, dtype=float), np.asarray(velocity, dtype=float))

    @property
    def radius(self) -> float:
        return float(np.linalg.norm(self.position))

    @property
    def speed(self) -> float:
        return float(np.linalg.norm(self.velocity))

    def energy(self, mu: float) -> float:
        return 0.5 * float(self.velocity @ self.velocity) - mu / self.radius

    def angular_momentum(self) -> float:
        return float(np.linalg.norm(np.cross(self.position, self.velocity)))

    def elements(self, mu: float) -> KeplerElements:
        return state_to_elements(self.position, self.velocity, mu)


@dataclass(frozen=True)
class Ephemeris:
    """Time-tagged trajectory stored column-wise.

    ``t`` has shape (N,), ``position`` and ``velocity`` (N, 3).
    """

    t: np.ndarray
    position: np.ndarray
    velocity: np.ndarray
    step: float

    def __post_init__(self):
        if len(self.t) == 0:
            raise DomainError("ephemeris must hold at least one sample")
        if len(self.t) > 1 and not np.all(np.diff(self.t) > 0):
            raise DomainError("ephemeris epochs must be strictly increasing")

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, k: int) -> StateVector:
        return StateVector(float(self.t[k]), self.position[k].copy(), self.velocity[k].copy())

    def __iter__(self):
        return (self[k] for k in range(len(self)))

    @property
    def first(self) -> StateVector:
        return self[0]

    @property
    def last(self) -> StateVector:
        return self[-1]

    @property
    def radius(self) -> np.ndarray:
        return np.linalg.norm(self.position, axis=1)

    @classmethod
    def from_rows(cls, rows, step: float) -> Ephemeris:
        arr = np.asarray(rows, dtype=float).reshape(-1, 7)
        return cls(arr[:, 0].copy(), arr[:, 1:4].copy(), arr[:, 4:7].copy(), step)

    @classmethod
    def concatenate(cls, parts, step: float) -> Ephemeris:
        """Join segments; a segment's first sample replaces a coincident last sample."""
        t, p, v = [], [], []
        for part in parts:
            if t and part.t[0] <= t[-1][-1]:
                if part.t[0] < t[-1][-1]:
                    raise DomainError("ephemeris segments overlap")
                t[-1], p[-1], v[-1] = t[-1][:-1], p[-1][:-1], v[-1][:-1]
            t.append(part.t)
            p.append(part.position)
            v.append(part.velocity)
        return cls(np.concatenate(t), np.concatenate(p), np.concatenate(v), step)

    def interpolate(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Cubic Hermite position and velocity at ``t`` inside the sampled span."""
        ts = self.t
        if t < ts[0] or t > ts[-1]:
            raise DomainError(f"t={t} s outside ephemeris span [{ts[0]}, {ts[-1]}]")
        k = int(np.searchsorted(ts, t, side="right")) - 1
        k = min(max(k, 0), len(ts) - 2) if len(ts) > 1 else 0
        if len(ts) == 1:
            return self.position[0].copy(), self.velocity[0].copy()
        h = ts[k + 1] - ts[k]
        s = (t - ts[k]) / h
        p0, p1 = self.position[k], self.position[k + 1]
        m0, m1 = self.velocity[k] * h, self.velocity[k + 1] * h
        s2, s3 = s * s, s * s * s
        pos = (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * m1
        dpos = ((6 * s2 - 6 * s) * p0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * p1 + (3 * s2 - 2 * s) * m1) / h
        return pos, dpos


@dataclass(frozen=True)
class GeodeticPoint:
    t: float
    lat: float
    lon: float
    alt: float


@dataclass(frozen=True)
class Burn:
    t: float
    dv_vector: np.ndarray

    @property
    def magnitude(self) -> float:
        return float(np.linalg.norm(self.dv_vector))


@dataclass(frozen=True)
class DeorbitResult:
    ephemeris: Ephemeris
    burns: tuple[Burn, Burn]
    plan: HohmannPlan
    transfer_apoapsis: float
    transfer_periapsis: float
    final_radius: float  # osculating semi-major axis after the second burn
    final_eccentricity: float
    final_radius_min: float
    final_radius_max: float
    transfer_duration: float
    coast_energy_drift: float  # max |de/e| over the transfer coast
    notes: tuple[str, ...] = field(default_factory=tuple)


def two_body_accel(position, mu: float = EARTH.mu) -> np.ndarray:
    r = np.asarray(position, dtype=float)
    rn = float(np.linalg.norm(r))
    if rn == 0:
        raise DomainError("two-body acceleration undefined at the origin")
    return -mu * r / rn**3


def _deriv(x, y, z, vx, vy, vz, mu):
    r2 = x * x + y * y + z * z
    k = -mu / (r2 * math.sqrt(r2))
    return vx, vy, vz, k * x, k * y, k * z


def _rk4(s, h, mu):
    x, y, z, vx, vy, vz = s
    k1 = _deriv(x, y, z, vx, vy, vz, mu)
    hh = 0.5 * h
    k2 = _deriv(x + hh * k1[0], y + hh * k1[1], z + hh * k1[2], vx + hh * k1[3], vy + hh * k1[4], vz + hh * k1[5], mu)
    k3 = _deriv(x + hh * k2[0], y + hh * k2[1], z + hh * k2[2], vx + hh * k2[3], vy + hh * k2[4], vz + hh * k2[5], mu)
    k4 = _deriv(x + h * k3[0], y + h * k3[1], z + h * k3[2], vx + h * k3[3], vy + h * k3[4], vz + h * k3[5], mu)
    h6 = h / 6.0
    return tuple(s[j] + h6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]) for j in range(6))


def _as_tuple(state: StateVector):
    return (*map(float, state.position), *map(float, state.velocity))


def _ephemeris(rows, step) -> Ephemeris:
    return Ephemeris.from_rows(rows, step)


def propagate(state: StateVector, duration: float, step: float = 1.0, body: Body = EARTH) -> Ephemeris:
    """Integrate two-body motion with classical RK4 at a fixed step.

    The final sample lands exactly on ``state.t + duration``; the last step
    is shortened as needed.

    Raises:
        ReentryError: the trajectory dips below ``body.radius``; the partial
            ephemeris up to the last sample above the surface is attached.
    """
    if not step > 0:
        raise DomainError(f"step must be positive, got {step}")
    if duration < 0:
        raise DomainError(f"duration must be non-negative, got {duration}")
    mu, r_min2 = body.mu, body.radius**2
    s = _as_tuple(state)
    t0 = state.t
    rows = [(t0, *s)]
    k = 0
    t_done = 0.0
    # sample k sits at k*step; the final sample snaps to duration
    while duration - t_done > 1e-9 * step:
        t_next = min((k + 1) * step, duration)
        if duration - t_next <= 1e-9 * step:
            t_next = duration
        s = _rk4(s, t_next - t_done, mu)
        k += 1
        t_done = t_next
        if s[0] * s[0] + s[1] * s[1] + s[2] * s[2] < r_min2:
            raise ReentryError(
                f"trajectory crossed the body surface near t={t0 + t_done:.3f} s", _ephemeris(rows, step)
            )
        rows.append((t0 + t_done, *s))
    return _ephemeris(rows, step)


def apply_impulse(state: StateVector, dv_along_track: float) -> StateVector:
    """Instantaneous along-track velocity change; negative is retrograde."""
    speed = state.speed
    if speed == 0:
        raise DomainError("cannot define the along-track direction for zero velocity")
    return StateVector(state.t, state.position.copy(), state.velocity + dv_along_track * state.velocity / speed)


def _radial_rate(s) -> float:
    return s[0] * s[3] + s[1] * s[4] + s[2] * s[5]


def _coast_to_apsis(state: StateVector, step: float, mu: float, r_min2: float, max_duration: float):
    """Propagate until r.v changes sign away from its initial trend.

    Returns (rows, apsis_time, apsis_state_tuple). The apsis epoch is refined
    by bisection on a single shortened RK4 step from the bracketing sample.
    """
    s = _as_tuple(state)
    t = state.t
    rows = [(t, *s)]
    trend = None
    k = 0
    while k * step <= max_duration:
        s_next = _rk4(s, step, mu)
        k += 1
        if s_next[0] ** 2 + s_next[1] ** 2 + s_next[2] ** 2 < r_min2:
            raise ReentryError(f"trajectory crossed the body surface near t={t + step:.3f} s", _ephemeris(rows, step))
        rate = _radial_rate(s_next)
        if trend is None:
            trend = math.copysign(1.0, rate)
        elif rate * trend <= 0:
            lo, hi = 0.0, step
            while hi - lo > PERIAPSIS_TIME_TOL:
                mid = 0.5 * (lo + hi)
                if _radial_rate(_rk4(s, mid, mu)) * trend > 0:
                    lo = mid
                else:
                    hi = mid
            tau = 0.5 * (lo + hi)
            s_apsis = _rk4(s, tau, mu)
            t_apsis = t + tau
            rows.append((t_apsis, *s_apsis))
            return rows, t_apsis, s_apsis
        s = s_next
        t = state.t + k * step
        rows.append((t, *s))
    raise DomainError("no apsis found within the coast window")


def simulate_deorbit(
    r1: float,
    r2: float,
    body: Body = EARTH,
    step: float = 1.0,
    inclination: float = 0.0,
    final_orbits: float = 1.0,
) -> DeorbitResult:
    """Fly the two-burn Hohmann transfer numerically.

    The spacecraft starts on a circular orbit of radius ``r1`` (inclined by
    ``inclination`` rad about the x axis), burns ``dv1`` along track, coasts
    to the opposite apsis, burns ``dv2`` and flies ``final_orbits``
    revolutions of the target orbit for verification. Burns are retrograde
    when ``r1 > r2``.

    Raises:
        ReentryError: any segment crosses the surface (partial ephemeris
            attached).
    """
    if not (r1 > body.radius and r2 > body.radius):
        raise DomainError("both orbit radii must lie above the body surface")
    mu = body.mu
    plan = plan_hohmann(r1, r2, mu)
    v1 = plan.v_orbit1
    ci, si = math.cos(inclination), math.sin(inclination)
    start = StateVector.of(0.0, [r1, 0.0, 0.0], [0.0, v1 * ci, v1 * si])

    after1 = apply_impulse(start, plan.burn_sign * plan.dv1)
    burn1 = Burn(0.0, after1.velocity - start.velocity)
    notes = []

    if plan.dv1 == 0.0:
        coast = propagate(after1, plan.tof, step, body)
        t_apsis = coast.t[-1]
    else:
        rows, t_apsis, _ = _coast_to_apsis(after1, step, mu, body.radius**2, 1.5 * plan.tof)
        coast = _ephemeris(rows, step)
    at_apsis = coast.last

    e0 = after1.energy(mu)
    drift = float(np.max(np.abs((0.5 * np.sum(coast.velocity**2, axis=1) - mu / coast.radius - e0) / e0)))

    after2 = apply_impulse(at_apsis, plan.burn_sign * plan.dv2)
    burn2 = Burn(at_apsis.t, after2.velocity - at_apsis.velocity)
    final_period = 2 * math.pi * math.sqrt(r2**3 / mu)
    tail = propagate(after2, final_orbits * final_period, step, body)
    ephem = Ephemeris.concatenate([coast, tail], step)

    t_el = after1.elements(mu)
    f_el = after2.elements(mu)
    radii = tail.radius
    return DeorbitResult(
        ephemeris=ephem,
        burns=(burn1, burn2),
        plan=plan,
        transfer_apoapsis=t_el.a * (1 + t_el.e),
        transfer_periapsis=t_el.a * (1 - t_el.e),
        final_radius=f_el.a,
        final_eccentricity=f_el.e,
        final_radius_min=float(radii.min()),
        final_radius_max=float(radii.max()),
        transfer_duration=t_apsis - start.t,
        coast_energy_drift=drift,
        notes=tuple(notes),
    )


def _wrap_pi(angle: float) -> float:
    w = math.remainder(angle, 2 * math.pi)
    return math.pi if w <= -math.pi else w


def ground_track(
    ephemeris: Ephemeris,
    earth_rotation_rate: float = EARTH_ROTATION_RATE,
    initial_gst: float = 0.0,
    body_radius: float = EARTH.radius,
) -> list[GeodeticPoint]:
    """Sub-satellite latitude, longitude and altitude over a spherical Earth."""
    out = []
    for t, (x, y, z) in zip(ephemeris.t, ephemeris.position):
        r = math.sqrt(x * x + y * y + z * z)
        lat = math.asin(max(-1.0, min(1.0, z / r)))
        lon = _wrap_pi(math.atan2(y, x) - (initial_gst + earth_rotation_rate * t))
        out.append(GeodeticPoint(float(t), lat, lon, r - body_radius))
    return out
