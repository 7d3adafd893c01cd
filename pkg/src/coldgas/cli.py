"""Command-line front end.

Exit status: 0 on success, 1 on a domain or computation error (including a
failed ``verify``), 2 on a usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

from coldgas import __version__, export
from coldgas.astro import plan_hohmann, size_propellant
from coldgas.config import CONFIG_ENV, KM, ConfigError, MissionConfig, load_config
from coldgas.errors import ConvergenceError, DomainError, ReentryError, TleFormatError
from coldgas.nozzle import quasi1d_profile
from coldgas.propagate import ground_track, simulate_deorbit
from coldgas.report import (
    SCREENING_NOTE,
    TANK_NOTE,
    TRAJECTORY_NOTE,
    Report,
    deorbit_section,
    design_from_config,
    hohmann_notes,
    hohmann_section,
    nozzle_notes,
    nozzle_section,
    propellant_section,
    run_mission,
    screening_section,
    tank_from_config,
    tank_section,
)
from coldgas.tank import stress_profile
from coldgas.tle import ScreeningReport, read_catalog, screen_conjunctions
from coldgas.verify import FAIL, format_checks, run_checks

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2

# flag -> MissionConfig field, shared by mission and the single-module commands
ORBIT_FLAGS = {
    "--alt1-km": "alt1_km",
    "--alt2-km": "alt2_km",
    "--mu": "mu",
    "--body-radius-km": "body_radius_km",
}
NOZZLE_FLAGS = {
    "--p0-bar": "p0_bar",
    "--pamb-bar": "pamb_bar",
    "--t0-k": "t0_k",
    "--throat-mm": "throat_mm",
    "--inlet-mm": "inlet_mm",
    "--half-angle-deg": "div_half_angle_deg",
    "--conv-length-mm": "conv_length_mm",
    "--gamma": "gamma",
    "--r-specific": "r_specific",
}
TANK_FLAGS = {
    "--inner-diameter-mm": "tank_inner_diameter_mm",
    "--thickness-mm": "tank_thickness_mm",
    "--length-mm": "tank_length_mm",
    "--p-internal-mpa": "tank_p_internal_mpa",
    "--p-external-mpa": "tank_p_external_mpa",
    "--target-von-mises-gpa": "tank_target_von_mises_gpa",
    "--tensile-gpa": "tensile_gpa",
    "--load-factor": "load_factor",
}
SIM_FLAGS = {
    "--step-s": "step_s",
    "--inclination-deg": "inclination_deg",
    "--final-orbits": "final_orbits",
    "--initial-gst-deg": "initial_gst_deg",
}
SCREEN_FLAGS = {
    "--threshold-km": "threshold_km",
    "--coarse-step-s": "coarse_step_s",
}


def _add_flags(parser, flags, required=()):
    for flag, dest in flags.items():
        parser.add_argument(flag, dest=dest, type=float, default=None, required=flag in required)


def _add_common(parser, out=True):
    parser.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    parser.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    if out:
        parser.add_argument("-o", "--out", help="directory for report, CSV and figure artifacts")
        parser.add_argument("--no-plots", action="store_true", help="skip PNG figures")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coldgas", description="Cold-gas deorbit mission toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mission", help="full pipeline: report, CSVs and figures")
    _add_common(p)
    for flags in (ORBIT_FLAGS, NOZZLE_FLAGS, TANK_FLAGS, SIM_FLAGS, SCREEN_FLAGS):
        _add_flags(p, flags)
    p.add_argument("--wet-mass-kg", dest="wet_mass_kg", type=float)
    p.add_argument("--catalog")
    p.add_argument("--start-epoch")

    p = sub.add_parser("hohmann", help="transfer plan and optional propellant budget")
    _add_common(p, out=False)
    _add_flags(p, ORBIT_FLAGS, required=("--alt1-km", "--alt2-km"))
    p.add_argument("--u-eq", type=float, help="effective exhaust velocity, m/s")
    p.add_argument("--wet-mass-kg", dest="wet_mass_kg", type=float)

    p = sub.add_parser("nozzle", help="nozzle design, performance and axial profile")
    _add_common(p)
    _add_flags(p, NOZZLE_FLAGS)
    p.add_argument("--samples", dest="nozzle_samples", type=int)

    p = sub.add_parser("tank", help="Lame stress field and safety verdict")
    _add_common(p)
    _add_flags(p, TANK_FLAGS)
    p.add_argument("--closed-ends", dest="tank_closed_ends", action="store_true", default=None)
    p.add_argument("--stations", dest="tank_stations", type=int)

    p = sub.add_parser("deorbit-sim", help="numerical two-burn deorbit with ground track")
    _add_common(p)
    _add_flags(p, ORBIT_FLAGS)
    _add_flags(p, SIM_FLAGS)

    p = sub.add_parser("screen", help="conjunction screening of the deorbit trajectory")
    _add_common(p)
    _add_flags(p, ORBIT_FLAGS)
    _add_flags(p, SIM_FLAGS)
    _add_flags(p, SCREEN_FLAGS)
    p.add_argument("--catalog", required=True, help="text file of 2- or 3-line element sets")
    p.add_argument("--start-epoch", help="ISO 8601 epoch of the deorbit t=0 (default: each TLE epoch)")

    p = sub.add_parser("verify", help="recompute reference table values and print pass/fail")
    p.add_argument("--config")
    return parser


_META = {"command", "config", "json", "out", "no_plots", "u_eq"}


def _config(args) -> MissionConfig:
    cfg = load_config(args.config)
    overrides = {k: v for k, v in vars(args).items() if k not in _META}
    return cfg.replace(**overrides)


def _emit(report: Report, args, out_dir=None):
    text = report.to_json() if args.json else report.to_text()
    sys.stdout.write(text)
    if out_dir is not None:
        export.atomic_write(Path(out_dir) / "report.txt", report.to_text())
        export.atomic_write(Path(out_dir) / "report.json", report.to_json())


def _write_metadata(out_dir, cfg: MissionConfig, command: str):
    meta = {
        "generated_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "version": __version__,
        "command": command,
        "config": cfg.to_dict(),
    }
    export.atomic_write(Path(out_dir) / "metadata.json", json.dumps(meta, indent=2) + "\n")


def cmd_mission(args) -> int:
    cfg = _config(args)
    result = run_mission(cfg, args.out, plots=not args.no_plots)
    if args.out:
        _write_metadata(args.out, cfg, "mission")
    sys.stdout.write(result.report.to_json() if args.json else result.report.to_text())
    return EXIT_OK


def cmd_hohmann(args) -> int:
    cfg = _config(args)
    plan = plan_hohmann(cfg.r1, cfg.r2, cfg.mu)
    report = Report([hohmann_section(plan, cfg.body.radius)], hohmann_notes(cfg, plan))
    if args.u_eq is not None:
        report.sections.append(propellant_section(size_propellant(plan.dv_total, args.u_eq, cfg.wet_mass_kg)))
    _emit(report, args)
    return EXIT_OK


def cmd_nozzle(args) -> int:
    cfg = _config(args)
    geom, perf = design_from_config(cfg)
    profile = quasi1d_profile(geom, cfg.chamber, cfg.nozzle_samples)
    report = Report([nozzle_section(geom, perf, cfg.chamber.p0, cfg.chamber.t0, cfg.p_ambient)], nozzle_notes(cfg, geom))
    _emit(report, args, args.out)
    if args.out:
        export.write_profile_csv(Path(args.out) / "nozzle_profile.csv", profile)
        if not args.no_plots:
            from coldgas import plotting

            plotting.nozzle_profile_figure(profile, Path(args.out) / "nozzle_profile.png", geom.x_throat)
    return EXIT_OK


def cmd_tank(args) -> int:
    cfg = _config(args)
    spec, verdict, source = tank_from_config(cfg)
    report = Report([tank_section(spec, verdict, source, cfg.material.name)], [TANK_NOTE])
    _emit(report, args, args.out)
    if args.out:
        prof = stress_profile(spec, cfg.tank_stations, cfg.tank_closed_ends)
        export.write_stress_csv(Path(args.out) / "tank_stress.csv", prof)
        if not args.no_plots:
            from coldgas import plotting

            plotting.hoop_stress_figure(prof, Path(args.out) / "tank_stress.png")
    return EXIT_OK


def _simulate(cfg: MissionConfig):
    return simulate_deorbit(cfg.r1, cfg.r2, cfg.body, cfg.step_s, cfg.inclination, cfg.final_orbits)


def cmd_deorbit(args) -> int:
    cfg = _config(args)
    result = _simulate(cfg)
    report = Report([deorbit_section(result, cfg.body.radius)], [TRAJECTORY_NOTE])
    _emit(report, args, args.out)
    if args.out:
        out = Path(args.out)
        track = ground_track(result.ephemeris, cfg.earth_rotation_rate, math.radians(cfg.initial_gst_deg), cfg.body.radius)
        export.write_ephemeris_csv(out / "ephemeris.csv", result.ephemeris)
        export.write_ground_track_csv(out / "ground_track.csv", track)
        if not args.no_plots:
            from coldgas import plotting

            burn_times = [b.t for b in result.burns]
            plotting.ground_track_figure(track, out / "ground_track.png", burn_times)
            plotting.orbit_figure(result.ephemeris, out / "orbit.png", cfg.body.radius, burn_times)
    return EXIT_OK


def cmd_screen(args) -> int:
    cfg = _config(args)
    result = _simulate(cfg)
    records, skipped = read_catalog(Path(cfg.catalog).read_text(encoding="utf-8"))
    rep = screen_conjunctions(result.ephemeris, records, cfg.threshold_km * KM, cfg.coarse_step_s, cfg.start_datetime, cfg.mu)
    rep = ScreeningReport(rep.events, rep.objects_screened, rep.skipped + skipped, rep.threshold, rep.coarse_step)
    report = Report([screening_section(rep)], [SCREENING_NOTE])
    _emit(report, args, args.out)
    if args.out:
        export.write_conjunction_csv(Path(args.out) / "conjunctions.csv", rep.events)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_checks(load_config(args.config))
    sys.stdout.write(format_checks(checks))
    return EXIT_ERROR if any(c.status == FAIL for c in checks) else EXIT_OK


COMMANDS = {
    "mission": cmd_mission,
    "hohmann": cmd_hohmann,
    "nozzle": cmd_nozzle,
    "tank": cmd_tank,
    "deorbit-sim": cmd_deorbit,
    "screen": cmd_screen,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"coldgas: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TleFormatError as exc:
        print(f"coldgas: TLE error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ReentryError as exc:
        print(f"coldgas: re-entry: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (DomainError, ConvergenceError) as exc:
        print(f"coldgas: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"coldgas: I/O error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
