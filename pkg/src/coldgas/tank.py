"""Thick-walled cylinder (Lame) stress analysis of the propellant tank.

Boundary pressures follow the compression-positive form ``p = b/r**2 - a``
evaluated at each face. Stresses returned by this module are
tension-positive::

    sigma_radial = a - b / r**2
    sigma_hoop   = a + b / r**2

so ``sigma_radial(r_inner) == -p_internal`` and the hoop stress at the inner
face equals ``b / r_inner**2 + a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from coldgas.errors import DomainError


@dataclass(frozen=True)
class TankSpec:
    r_inner: float
    thickness: float
    length: float
    p_internal: float
    p_external: float = 0.0

    def __post_init__(self):
        if not self.r_inner > 0:
            raise DomainError(f"inner radius must be positive, got {self.r_inner}")
        if not self.thickness > 0:
            raise DomainError(f"wall thickness must be positive, got {self.thickness}")
        if not self.length > 0:
            raise DomainError(f"tank length must be positive, got {self.length}")
        if self.p_internal < 0 or self.p_external < 0:
            raise DomainError("pressures must be non-negative")

    @property
    def r_outer(self) -> float:
        return self.r_inner + self.thickness

    @property
    def internal_volume(self) -> float:
        return math.pi * self.r_inner**2 * self.length

    def with_pressures(self, p_internal: float, p_external: float | None = None) -> TankSpec:
        return TankSpec(
            self.r_inner,
            self.thickness,
            self.length,
            p_internal,
            self.p_external if p_external is None else p_external,
        )


@dataclass(frozen=True)
class LameField:
    coeff_a: float  # Pa
    coeff_b: float  # Pa m^2

    def radial(self, r: float) -> float:
        return self.coeff_a - self.coeff_b / (r * r)

    def hoop(self, r: float) -> float:
        return self.coeff_a + self.coeff_b / (r * r)


@dataclass(frozen=True)
class MaterialSpec:
    tensile_strength: float = 3.0e9
    density: float = 2230.0
    load_factor: float = 1.5
    name: str = "boron-fibre reinforced tungsten matrix"

    def __post_init__(self):
        if not self.tensile_strength > 0:
            raise DomainError("tensile strength must be positive")
        if self.load_factor < 1:
            raise DomainError(f"load factor must be >= 1, got {self.load_factor}")

    @property
    def allowable(self) -> float:
        return self.tensile_strength / self.load_factor


@dataclass(frozen=True)
class StressStation:
    r: float
    sigma_radial: float
    sigma_hoop: float
    von_mises: float


@dataclass(frozen=True)
class SafetyVerdict:
    max_von_mises: float
    allowable: float
    margin: float  # allowable / max_von_mises - 1
    passed: bool


def solve_lame(spec: TankSpec) -> LameField:
    ri2 = spec.r_inner**2
    re2 = spec.r_outer**2
    denom = re2 - ri2
    if denom <= 0:
        raise DomainError("singular Lame system: outer radius equals inner radius")
    b = (spec.p_internal - spec.p_external) * ri2 * re2 / denom
    a = (spec.p_internal * ri2 - spec.p_external * re2) / denom
    return LameField(coeff_a=a, coeff_b=b)


def axial_stress(spec: TankSpec) -> float:
    """Uniform axial stress of a closed-end cylinder, ``p_i ri^2 - p_o re^2`` over the wall area."""
    return solve_lame(spec).coeff_a


def von_mises(sigma_radial: float, sigma_hoop: float, sigma_axial: float = 0.0) -> float:
    return math.sqrt(
        0.5
        * (
            (sigma_radial - sigma_hoop) ** 2
            + (sigma_hoop - sigma_axial) ** 2
            + (sigma_axial - sigma_radial) ** 2
        )
    )


def _station(field: LameField, r: float, sigma_z: float) -> StressStation:
    sr = field.radial(r)
    sh = field.hoop(r)
    return StressStation(r=r, sigma_radial=sr, sigma_hoop=sh, von_mises=von_mises(sr, sh, sigma_z))


def stress_profile(spec: TankSpec, n_stations: int = 51, closed_ends: bool = False) -> list[StressStation]:
    """Stresses at ``n_stations`` radii spaced evenly from inner to outer face.

    With ``closed_ends`` the end-cap axial stress enters the von Mises
    combination; otherwise the wall is treated as an open cylinder.
    """
    if n_stations < 2:
        raise DomainError(f"need at least 2 stations, got {n_stations}")
    field = solve_lame(spec)
    sigma_z = field.coeff_a if closed_ends else 0.0
    ri, re = spec.r_inner, spec.r_outer
    out = []
    for i in range(n_stations):
        r = ri + (re - ri) * i / (n_stations - 1)
        out.append(_station(field, r, sigma_z))
    # pin the faces so the boundary conditions are not disturbed by x*(re-ri) roundoff
    out[0] = _station(field, ri, sigma_z)
    out[-1] = _station(field, re, sigma_z)
    return out


def max_von_mises(spec: TankSpec, closed_ends: bool = False) -> float:
    # von Mises^2 is convex in 1/r^2 for the Lame field, so the max sits on a face
    field = solve_lame(spec)
    sigma_z = field.coeff_a if closed_ends else 0.0
    return max(
        _station(field, spec.r_inner, sigma_z).von_mises,
        _station(field, spec.r_outer, sigma_z).von_mises,
    )


def verdict(max_stress: float, material: MaterialSpec) -> SafetyVerdict:
    allowable = material.allowable
    margin = math.inf if max_stress == 0 else allowable / max_stress - 1.0
    return SafetyVerdict(
        max_von_mises=max_stress,
        allowable=allowable,
        margin=margin,
        passed=max_stress <= allowable,
    )


def safety_check(spec: TankSpec, material: MaterialSpec, closed_ends: bool = False) -> SafetyVerdict:
    return verdict(max_von_mises(spec, closed_ends), material)


def pressure_for_von_mises(spec: TankSpec, target: float, closed_ends: bool = False) -> float:
    """Internal pressure at which the peak von Mises stress reaches ``target``.

    Uses the linearity of the Lame field in pressure; ``p_external`` is held
    at zero for the scaling.
    """
    if not target > 0:
        raise DomainError("target stress must be positive")
    unit = max_von_mises(spec.with_pressures(1.0, 0.0), closed_ends)
    return target / unit
