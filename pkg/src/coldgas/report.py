"""Mission pipeline and report rendering.

A report is an ordered list of sections, each an ordered list of
``(key, value, unit)`` quantities, plus free-text notes. The text and JSON
renderings are generated from the same list, so they always carry the same
content.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from coldgas import export
from coldgas.astro import HohmannPlan, PropellantBudget, plan_hohmann, size_propellant
from coldgas.config import GPA, KM, MM, MPA, MissionConfig
from coldgas.nozzle import (
    BAR,
    NozzleGeometry,
    NozzlePerformance,
    convergent_half_angle,
    design_nozzle,
    performance,
    quasi1d_profile,
)
from coldgas.propagate import DeorbitResult, ground_track, simulate_deorbit
from coldgas.tank import SafetyVerdict, TankSpec, pressure_for_von_mises, safety_check, stress_profile
from coldgas.tle import ScreeningReport, read_catalog, screen_conjunctions

SCHEMA = "coldgas.mission-report/1"

# reference design-table values used only for discrepancy notes
REFERENCE_DIVERGENT_LENGTH_MM = 9.46
REFERENCE_DV1_KMS = 0.05529
REFERENCE_DV2_KMS = 0.05561


@dataclass(frozen=True)
class Quantity:
    key: str
    value: float | int | str | bool
    unit: str


@dataclass
class Section:
    name: str
    quantities: list[Quantity] = field(default_factory=list)

    def add(self, key, value, unit):
        self.quantities.append(Quantity(key, value, unit))
        return self


@dataclass
class Report:
    sections: list[Section] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def section(self, name: str) -> Section:
        for s in self.sections:
            if s.name == name:
                return s
        raise KeyError(name)

    def value(self, section: str, key: str):
        for q in self.section(section).quantities:
            if q.key == key:
                return q.value
        raise KeyError(f"{section}.{key}")

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "sections": {
                s.name: {q.key: {"value": _json_value(q.value), "unit": q.unit} for q in s.quantities}
                for s in self.sections
            },
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def to_text(self) -> str:
        lines = []
        for s in self.sections:
            lines.append(f"[{s.name}]")
            width = max((len(q.key) for q in s.quantities), default=0)
            for q in s.quantities:
                lines.append(f"  {q.key:<{width}}  {_fmt(q.value)} {q.unit}".rstrip())
            lines.append("")
        if self.notes:
            lines.append("[notes]")
            lines.extend(f"  - {n}" for n in self.notes)
            lines.append("")
        return "\n".join(lines)


def _json_value(value):
    # strict JSON has no infinities
    if isinstance(value, float) and not math.isfinite(value):
        return _fmt(value)
    return value


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.10g}"
    return str(value)


# --- sections --------------------------------------------------------------


def hohmann_section(plan: HohmannPlan, body_radius: float) -> Section:
    s = Section("hohmann")
    s.add("r_body", body_radius / KM, "km")
    s.add("r_orbit1", plan.r1 / KM, "km")
    s.add("r_orbit2", plan.r2 / KM, "km")
    s.add("a_transfer", plan.a_transfer / KM, "km")
    s.add("eps_transfer", plan.eps_transfer / 1e6, "km^2/s^2")
    s.add("eps_orbit1", plan.eps_orbit1 / 1e6, "km^2/s^2")
    s.add("eps_orbit2", plan.eps_orbit2 / 1e6, "km^2/s^2")
    s.add("v_t1", plan.v_t1 / KM, "km/s")
    s.add("v_orbit1", plan.v_orbit1 / KM, "km/s")
    s.add("dv1", plan.dv1 / KM, "km/s")
    s.add("v_t2", plan.v_t2 / KM, "km/s")
    s.add("v_orbit2", plan.v_orbit2 / KM, "km/s")
    s.add("dv2", plan.dv2 / KM, "km/s")
    s.add("dv_total", plan.dv_total / KM, "km/s")
    s.add("tof", plan.tof, "s")
    s.add("burn_direction", "retrograde" if plan.is_descent else "prograde", "-")
    return s


def propellant_section(budget: PropellantBudget) -> Section:
    s = Section("propellant")
    s.add("dv", budget.dv, "m/s")
    s.add("u_eq", budget.u_eq, "m/s")
    s.add("mass_ratio", budget.mass_ratio, "-")
    s.add("m_initial", budget.m_initial, "kg")
    s.add("m_final", budget.m_final, "kg")
    s.add("m_propellant", budget.m_propellant, "kg")
    return s


def nozzle_section(geom: NozzleGeometry, perf: NozzlePerformance, p0: float, t0: float, p_ambient: float) -> Section:
    s = Section("nozzle")
    s.add("p0", p0 / BAR, "bar")
    s.add("t0", t0, "K")
    s.add("p_ambient", p_ambient / BAR, "bar")
    s.add("d_inlet", geom.d_inlet / MM, "mm")
    s.add("d_throat", geom.d_throat / MM, "mm")
    s.add("d_exit", geom.d_exit / MM, "mm")
    s.add("throat_area", geom.a_throat, "m^2")
    s.add("exit_area", geom.a_exit, "m^2")
    s.add("expansion_ratio", geom.expansion_ratio, "-")
    s.add("half_angle_convergent", math.degrees(geom.half_angle_convergent), "deg")
    s.add("half_angle_divergent", math.degrees(geom.half_angle_divergent), "deg")
    s.add("len_convergent", geom.len_convergent / MM, "mm")
    s.add("len_divergent", geom.len_divergent / MM, "mm")
    s.add("mach_exit", perf.mach_exit, "-")
    s.add("p_exit", perf.p_exit / BAR, "bar")
    s.add("t_exit", perf.t_exit, "K")
    s.add("v_exit", perf.v_exit, "m/s")
    s.add("mdot", perf.mdot, "kg/s")
    s.add("thrust", perf.thrust, "N")
    s.add("u_eq", perf.u_eq, "m/s")
    return s


def tank_section(spec: TankSpec, verdict: SafetyVerdict, pressure_source: str, material_name: str) -> Section:
    s = Section("tank")
    s.add("inner_diameter", 2 * spec.r_inner / MM, "mm")
    s.add("thickness", spec.thickness / MM, "mm")
    s.add("length", spec.length / MM, "mm")
    s.add("internal_volume", spec.internal_volume * 1e6, "cm^3")
    s.add("p_internal", spec.p_internal / MPA, "MPa")
    s.add("p_internal_source", pressure_source, "-")
    s.add("p_external", spec.p_external / MPA, "MPa")
    s.add("material", material_name, "-")
    s.add("max_von_mises", verdict.max_von_mises / GPA, "GPa")
    s.add("allowable", verdict.allowable / GPA, "GPa")
    s.add("margin", verdict.margin, "-")
    s.add("pass", verdict.passed, "-")
    return s


def deorbit_section(result: DeorbitResult, body_radius: float) -> Section:
    s = Section("deorbit")
    b1, b2 = result.burns
    s.add("burn1_epoch", b1.t, "s")
    s.add("burn1_dv", b1.magnitude, "m/s")
    s.add("burn2_epoch", b2.t, "s")
    s.add("burn2_dv", b2.magnitude, "m/s")
    s.add("transfer_duration", result.transfer_duration, "s")
    s.add("planned_tof", result.plan.tof, "s")
    s.add("transfer_apoapsis_alt", (result.transfer_apoapsis - body_radius) / KM, "km")
    s.add("transfer_periapsis_alt", (result.transfer_periapsis - body_radius) / KM, "km")
    s.add("final_radius", result.final_radius / KM, "km")
    s.add("final_eccentricity", result.final_eccentricity, "-")
    s.add("final_alt_min", (result.final_radius_min - body_radius) / KM, "km")
    s.add("final_alt_max", (result.final_radius_max - body_radius) / KM, "km")
    s.add("coast_energy_drift", result.coast_energy_drift, "-")
    s.add("samples", len(result.ephemeris), "count")
    s.add("step", result.ephemeris.step, "s")
    return s


def screening_section(report: ScreeningReport | None) -> Section:
    s = Section("conjunctions")
    if report is None:
        s.add("status", "not run (no catalog)", "-")
        return s
    s.add("objects_screened", report.objects_screened, "count")
    s.add("entries_skipped", report.skipped, "count")
    s.add("threshold", report.threshold / KM, "km")
    s.add("coarse_step", report.coarse_step, "s")
    s.add("events", len(report.events), "count")
    for k, e in enumerate(report.events, 1):
        s.add(f"event{k}_object", e.object_id, "-")
        s.add(f"event{k}_t_closest", e.t_closest, "s")
        s.add(f"event{k}_miss_distance", e.miss_distance / KM, "km")
        s.add(f"event{k}_relative_speed", e.relative_speed, "m/s")
    return s


# --- pipeline --------------------------------------------------------------


@dataclass
class MissionResult:
    config: MissionConfig
    plan: HohmannPlan
    budget: PropellantBudget
    geometry: NozzleGeometry
    performance: NozzlePerformance
    profile: list
    tank_spec: TankSpec
    tank_verdict: SafetyVerdict
    tank_profile: list
    deorbit: DeorbitResult
    ground_track: list
    screening: ScreeningReport | None
    report: Report


def design_from_config(cfg: MissionConfig):
    chamber = cfg.chamber
    d_throat = cfg.throat_mm * MM
    d_inlet = cfg.inlet_mm * MM
    conv_angle = convergent_half_angle(d_inlet, d_throat, cfg.conv_length_mm * MM)
    geom = design_nozzle(chamber, cfg.p_ambient, d_throat, d_inlet, math.radians(cfg.div_half_angle_deg), conv_angle)
    perf = performance(geom, chamber, cfg.p_ambient)
    return geom, perf


def tank_from_config(cfg: MissionConfig):
    spec = cfg.tank()
    if cfg.tank_p_internal_mpa is None:
        p = pressure_for_von_mises(spec, cfg.tank_target_von_mises_gpa * GPA, cfg.tank_closed_ends)
        spec = cfg.tank(p)
        source = f"inverse mode: pressure giving {cfg.tank_target_von_mises_gpa:g} GPa peak von Mises"
    else:
        source = "configured"
    verdict = safety_check(spec, cfg.material, cfg.tank_closed_ends)
    return spec, verdict, source


def nozzle_notes(cfg: MissionConfig, geom: NozzleGeometry) -> list[str]:
    notes = [
        f"convergent length {cfg.conv_length_mm:g} mm taken as given geometry; "
        f"implied convergent half-angle {math.degrees(geom.half_angle_convergent):.4f} deg",
        "nozzle flow is quasi-1D, inviscid and shock-free; 3D turbulent CFD is not modelled",
    ]
    if (cfg.throat_mm, cfg.inlet_mm, cfg.div_half_angle_deg) == (5.0, 10.0, 5.0):
        notes.insert(
            0,
            f"divergent length from half-angle and diameters is {geom.len_divergent / MM:.3f} mm; "
            f"the reference design table lists {REFERENCE_DIVERGENT_LENGTH_MM} mm, which is inconsistent "
            "with a 5 deg cone between these diameters (not matched)",
        )
    return notes


def hohmann_notes(cfg: MissionConfig, plan: HohmannPlan) -> list[str]:
    if (cfg.alt1_km, cfg.alt2_km, cfg.body_radius_km, cfg.mu) != (600.0, 400.0, 6370.0, 3.986e14):
        return []
    return [
        f"dv1/dv2 computed as {plan.dv1 / KM:.5f}/{plan.dv2 / KM:.5f} km/s; the reference table lists "
        f"{REFERENCE_DV1_KMS}/{REFERENCE_DV2_KMS} km/s; their ratio depends only on r2/r1, so no choice of mu "
        "reproduces both at these radii; the total and every tabulated speed agree"
    ]


TANK_NOTE = (
    "tank stresses are analytic Lame values (open cylinder unless closed ends are selected); "
    "FEA deformation is not predicted because elastic constants are not available"
)
TRAJECTORY_NOTE = (
    "burns are impulsive; ground track uses a spherical Earth without an ellipsoid model; "
    "final-altitude wander from a commercial tool's integration tolerance is not reproduced"
)
SCREENING_NOTE = "conjunction screening propagates TLE mean elements as two-body orbits (coarse screening only)"
SCOPE_NOTES = (TANK_NOTE, TRAJECTORY_NOTE, SCREENING_NOTE)


def run_mission(cfg: MissionConfig, out_dir=None, plots: bool = True) -> MissionResult:
    """Run the full pipeline; with ``out_dir`` also write report, CSV and figure artifacts."""
    body = cfg.body
    plan = plan_hohmann(cfg.r1, cfg.r2, body.mu)
    geom, perf = design_from_config(cfg)
    profile = quasi1d_profile(geom, cfg.chamber, cfg.nozzle_samples)
    budget = size_propellant(plan.dv_total, perf.u_eq, cfg.wet_mass_kg)
    spec, verdict, source = tank_from_config(cfg)
    tank_prof = stress_profile(spec, cfg.tank_stations, cfg.tank_closed_ends)
    deorbit = simulate_deorbit(cfg.r1, cfg.r2, body, cfg.step_s, cfg.inclination, cfg.final_orbits)
    track = ground_track(deorbit.ephemeris, cfg.earth_rotation_rate, math.radians(cfg.initial_gst_deg), body.radius)

    screening = None
    if cfg.catalog:
        text = Path(cfg.catalog).read_text(encoding="utf-8")
        records, skipped = read_catalog(text)
        screening = screen_conjunctions(
            deorbit.ephemeris, records, cfg.threshold_km * KM, cfg.coarse_step_s, cfg.start_datetime, body.mu
        )
        screening = ScreeningReport(
            screening.events, screening.objects_screened, screening.skipped + skipped,
            screening.threshold, screening.coarse_step,
        )

    report = Report(
        sections=[
            hohmann_section(plan, body.radius),
            propellant_section(budget),
            nozzle_section(geom, perf, cfg.chamber.p0, cfg.chamber.t0, cfg.p_ambient),
            tank_section(spec, verdict, source, cfg.material.name),
            deorbit_section(deorbit, body.radius),
            screening_section(screening),
        ],
        notes=[
            *hohmann_notes(cfg, plan),
            *nozzle_notes(cfg, geom),
            *SCOPE_NOTES,
        ],
    )
    result = MissionResult(
        cfg, plan, budget, geom, perf, profile, spec, verdict, tank_prof, deorbit, track, screening, report
    )
    if out_dir is not None:
        write_mission_artifacts(result, out_dir, plots)
    return result


def write_mission_artifacts(result: MissionResult, out_dir, plots: bool = True) -> dict[str, Path]:
    out = Path(out_dir)
    paths = {
        "report_txt": export.atomic_write(out / "report.txt", result.report.to_text()),
        "report_json": export.atomic_write(out / "report.json", result.report.to_json()),
        "nozzle_profile": export.write_profile_csv(out / "nozzle_profile.csv", result.profile),
        "tank_stress": export.write_stress_csv(out / "tank_stress.csv", result.tank_profile),
        "ephemeris": export.write_ephemeris_csv(out / "ephemeris.csv", result.deorbit.ephemeris),
        "ground_track": export.write_ground_track_csv(out / "ground_track.csv", result.ground_track),
    }
    if result.screening is not None:
        paths["conjunctions"] = export.write_conjunction_csv(out / "conjunctions.csv", result.screening.events)
    if plots:
        from coldgas import plotting

        burn_times = [b.t for b in result.deorbit.burns]
        paths["nozzle_png"] = plotting.nozzle_profile_figure(
            result.profile, out / "nozzle_profile.png", result.geometry.x_throat
        )
        paths["tank_png"] = plotting.hoop_stress_figure(result.tank_profile, out / "tank_stress.png")
        paths["ground_track_png"] = plotting.ground_track_figure(result.ground_track, out / "ground_track.png", burn_times)
        paths["orbit_png"] = plotting.orbit_figure(
            result.deorbit.ephemeris, out / "orbit.png", result.config.body.radius, burn_times
        )
    return paths
