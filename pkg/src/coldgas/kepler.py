"""Kepler's equation and classical-element / Cartesian conversions."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from coldgas.astro import MU_EARTH
from coldgas.errors import ConvergenceError, DomainError

KEPLER_TOL = 1e-12
KEPLER_MAX_ITER = 50
_TWO_PI = 2.0 * math.pi
# below these the node / periapsis are undefined and are set to zero
_ECC_EPS = 1e-11
_INC_EPS = 1e-11


class KeplerElements(NamedTuple):
    a: float
    e: float
    i: float
    raan: float
    argp: float
    mean_anomaly: float


def wrap_two_pi(angle: float) -> float:
    angle = math.fmod(angle, _TWO_PI)
    return angle + _TWO_PI if angle < 0 else angle


def solve_kepler(mean_anomaly: float, e: float, tol: float = KEPLER_TOL, max_iter: int = KEPLER_MAX_ITER) -> float:
    """Eccentric anomaly E with ``E - e sin E = M``, by Newton iteration from ``E0 = M``.

    ``mean_anomaly`` is reduced to [0, 2pi) first; the returned E lies in
    the same revolution.

    Raises:
        DomainError: ``e`` outside [0, 1).
        ConvergenceError: no convergence in ``max_iter`` steps.
    """
    if not 0 <= e < 1:
        raise DomainError(f"eccentricity must satisfy 0 <= e < 1, got {e}")
    m = wrap_two_pi(mean_anomaly)
    E = m
    for _ in range(max_iter):
        f = E - e * math.sin(E) - m
        step = f / (1.0 - e * math.cos(E))
        E -= step
        if abs(step) < tol:
            return E
    raise ConvergenceError(f"Kepler solver did not converge for M={m}, e={e}")


def true_from_eccentric(E: float, e: float) -> float:
    return 2.0 * math.atan2(math.sqrt(1 + e) * math.sin(E / 2), math.sqrt(1 - e) * math.cos(E / 2))


def eccentric_from_true(nu: float, e: float) -> float:
    return 2.0 * math.atan2(math.sqrt(1 - e) * math.sin(nu / 2), math.sqrt(1 + e) * math.cos(nu / 2))


def _rotation(raan: float, inc: float, argp: float) -> np.ndarray:
    # perifocal -> inertial, R3(-raan) R1(-inc) R3(-argp)
    cO, sO = math.cos(raan), math.sin(raan)
    ci, si = math.cos(inc), math.sin(inc)
    cw, sw = math.cos(argp), math.sin(argp)
    return np.array(
        [
            [cO * cw - sO * sw * ci, -cO * sw - sO * cw * ci, sO * si],
            [sO * cw + cO * sw * ci, -sO * sw + cO * cw * ci, -cO * si],
            [sw * si, cw * si, ci],
        ]
    )


def elements_to_state(el: KeplerElements, mu: float = MU_EARTH) -> tuple[np.ndarray, np.ndarray]:
    """Inertial position (m) and velocity (m/s) from classical elements (rad)."""
    a, e = el.a, el.e
    if not a > 0:
        raise DomainError(f"semi-major axis must be positive, got {a}")
    E = solve_kepler(el.mean_anomaly, e)
    cE, sE = math.cos(E), math.sin(E)
    root = math.sqrt(1 - e * e)
    r = a * (1 - e * cE)
    pos_pf = np.array([a * (cE - e), a * root * sE, 0.0])
    vel_pf = math.sqrt(mu * a) / r * np.array([-sE, root * cE, 0.0])
    rot = _rotation(el.raan, el.i, el.argp)
    return rot @ pos_pf, rot @ vel_pf


def state_to_elements(position, velocity, mu: float = MU_EARTH) -> KeplerElements:
    """Classical elements of an elliptic state.

    Circular orbits take ``argp = 0`` with the anomaly measured from the
    node; equatorial orbits take ``raan = 0`` with angles measured from +x.
    """
    r = np.asarray(position, dtype=float)
    v = np.asarray(velocity, dtype=float)
    rn = float(np.linalg.norm(r))
    vn2 = float(v @ v)
    h = np.cross(r, v)
    hn = float(np.linalg.norm(h))
    if rn == 0 or hn == 0:
        raise DomainError("state has zero position or zero angular momentum")
    energy = 0.5 * vn2 - mu / rn
    if energy >= 0:
        raise DomainError("state is not on a bound (elliptic) orbit")
    a = -mu / (2 * energy)
    e_vec = ((vn2 - mu / rn) * r - float(r @ v) * v) / mu
    e = float(np.linalg.norm(e_vec))
    inc = math.acos(max(-1.0, min(1.0, h[2] / hn)))

    node = np.array([-h[1], h[0], 0.0])
    node_n = float(np.linalg.norm(node))
    equatorial = node_n <= _INC_EPS * hn
    if equatorial:
        raan = 0.0
        node_dir = np.array([1.0, 0.0, 0.0])
    else:
        raan = wrap_two_pi(math.atan2(node[1], node[0]))
        node_dir = node / node_n
    # in-plane axis 90 deg ahead of node_dir, along the direction of motion
    perp = np.cross(h / hn, node_dir)

    if e <= _ECC_EPS:
        e = 0.0
        argp = 0.0
        nu = math.atan2(float(r @ perp), float(r @ node_dir))
    else:
        argp = math.atan2(float(e_vec @ perp), float(e_vec @ node_dir))
        e_dir = e_vec / e
        nu = math.atan2(float(r @ np.cross(h / hn, e_dir)), float(r @ e_dir))
    E = eccentric_from_true(nu, e)
    M = E - e * math.sin(E)
    return KeplerElements(a, e, inc, wrap_two_pi(raan), wrap_two_pi(argp), wrap_two_pi(M))


def mean_motion(a: float, mu: float = MU_EARTH) -> float:
    """Mean motion in rad/s."""
    return math.sqrt(mu / a**3)


def semi_major_axis(n: float, mu: float = MU_EARTH) -> float:
    """Semi-major axis from mean motion ``n`` in rad/s."""
    if not n > 0:
        raise DomainError(f"mean motion must be positive, got {n}")
    return (mu / (n * n)) ** (1.0 / 3.0)
