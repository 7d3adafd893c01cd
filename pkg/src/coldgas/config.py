"""Mission configuration: defaults, JSON file loading and unit conversion.

Config keys carry their unit in the name (``alt1_km``, ``p0_bar`` ...). The
defaults reproduce the reference nano-satellite deorbit scenario: 600 km to 400 km, a
1 bar / 290 K air chamber, a 5 mm throat expanding to 0.1 bar and a
16.56 mm bore tank with 3.1 mm walls.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from coldgas.astro import Body
from coldgas.nozzle import BAR, ChamberState, GasModel
from coldgas.propagate import EARTH_ROTATION_RATE
from coldgas.tank import MaterialSpec, TankSpec

CONFIG_ENV = "COLDGAS_CONFIG"

KM = 1e3
MM = 1e-3
MPA = 1e6
GPA = 1e9


class ConfigError(ValueError):
    """The configuration document is malformed."""


@dataclass(frozen=True)
class MissionConfig:
    mu: float = 3.986e14
    body_radius_km: float = 6370.0
    alt1_km: float = 600.0
    alt2_km: float = 400.0
    wet_mass_kg: float = 10.0
    # chamber and gas
    p0_bar: float = 1.0
    t0_k: float = 290.0
    gamma: float = 1.4
    r_specific: float = 287.0
    gas_name: str = "dry air"
    # nozzle
    pamb_bar: float = 0.1
    throat_mm: float = 5.0
    inlet_mm: float = 10.0
    div_half_angle_deg: float = 5.0
    conv_length_mm: float = 11.43
    nozzle_samples: int = 101
    # tank and material
    tank_inner_diameter_mm: float = 16.56
    tank_thickness_mm: float = 3.1
    tank_length_mm: float = 12.0
    tank_p_internal_mpa: float | None = None
    tank_p_external_mpa: float = 0.0
    tank_target_von_mises_gpa: float = 1.19
    tank_closed_ends: bool = False
    tank_stations: int = 51
    tensile_gpa: float = 3.0
    material_density: float = 2230.0
    load_factor: float = 1.5
    material_name: str = "boron-fibre reinforced tungsten matrix"
    # trajectory
    step_s: float = 1.0
    inclination_deg: float = 0.0
    earth_rotation_rate: float = EARTH_ROTATION_RATE
    initial_gst_deg: float = 0.0
    final_orbits: float = 1.0
    # conjunction screening
    catalog: str | None = None
    threshold_km: float = 5.0
    coarse_step_s: float = 10.0
    start_epoch: str | None = None

    # --- SI views ---------------------------------------------------------
    @property
    def body(self) -> Body:
        return Body(self.mu, self.body_radius_km * KM)

    @property
    def r1(self) -> float:
        return (self.body_radius_km + self.alt1_km) * KM

    @property
    def r2(self) -> float:
        return (self.body_radius_km + self.alt2_km) * KM

    @property
    def gas(self) -> GasModel:
        return GasModel(self.gamma, self.r_specific, self.gas_name)

    @property
    def chamber(self) -> ChamberState:
        return ChamberState(self.p0_bar * BAR, self.t0_k, self.gas)

    @property
    def p_ambient(self) -> float:
        return self.pamb_bar * BAR

    def tank(self, p_internal: float | None = None) -> TankSpec:
        """Tank spec; ``p_internal`` in Pa overrides the configured pressure."""
        if p_internal is None:
            p_internal = 0.0 if self.tank_p_internal_mpa is None else self.tank_p_internal_mpa * MPA
        return TankSpec(
            r_inner=self.tank_inner_diameter_mm * MM / 2,
            thickness=self.tank_thickness_mm * MM,
            length=self.tank_length_mm * MM,
            p_internal=p_internal,
            p_external=self.tank_p_external_mpa * MPA,
        )

    @property
    def material(self) -> MaterialSpec:
        return MaterialSpec(self.tensile_gpa * GPA, self.material_density, self.load_factor, self.material_name)

    @property
    def inclination(self) -> float:
        return math.radians(self.inclination_deg)

    @property
    def start_datetime(self) -> datetime | None:
        if self.start_epoch is None:
            return None
        try:
            dt = datetime.fromisoformat(self.start_epoch)
        except ValueError as exc:
            raise ConfigError(f"start_epoch {self.start_epoch!r} is not ISO 8601") from exc
        return dt if dt.tzinfo else dt.replace(tzinfo=timezone.utc)

    def replace(self, **changes) -> MissionConfig:
        return dataclasses.replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_FIELDS = {f.name: f for f in dataclasses.fields(MissionConfig)}


def _coerce(name, value):
    default = _FIELDS[name].default
    if value is None:
        return None
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"config key {name!r} must be true or false")
        return value
    if isinstance(default, int) and not isinstance(default, bool):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"config key {name!r} must be an integer")
        return value
    if isinstance(default, float) or name == "tank_p_internal_mpa":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"config key {name!r} must be a number")
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"config key {name!r} must be a string")
    return value


def config_from_mapping(data: dict, base: MissionConfig | None = None) -> MissionConfig:
    if not isinstance(data, dict):
        raise ConfigError("config document must be a JSON object")
    unknown = sorted(set(data) - set(_FIELDS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    values = {k: _coerce(k, v) for k, v in data.items()}
    return dataclasses.replace(base or MissionConfig(), **values)


def load_config(path=None) -> MissionConfig:
    """Read a JSON config; without ``path`` fall back to ``$COLDGAS_CONFIG`` or defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV) or None
    if path is None:
        return MissionConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_mapping(data)
