"""CSV artifacts and atomic file output."""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from pathlib import Path

PROFILE_HEADER = ("x_m", "area_m2", "mach", "p_pa", "t_k", "v_mps")
STRESS_HEADER = ("r_m", "sigma_radial_pa", "sigma_hoop_pa", "von_mises_pa")
EPHEMERIS_HEADER = ("t_s", "x_m", "y_m", "z_m", "vx_mps", "vy_mps", "vz_mps")
GROUND_TRACK_HEADER = ("t_s", "lat_deg", "lon_deg", "alt_m")
CONJUNCTION_HEADER = ("object_id", "name", "t_closest_s", "miss_distance_m", "relative_speed_mps")


def atomic_write(path, data: str | bytes) -> Path:
    """Write via a temporary file in the target directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"newline": "", "encoding": "utf-8"})) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def profile_rows(stations):
    return [(s.x, s.area, s.mach, s.p, s.t, s.v) for s in stations]


def stress_rows(stations):
    return [(s.r, s.sigma_radial, s.sigma_hoop, s.von_mises) for s in stations]


def ephemeris_rows(ephemeris):
    return [(float(t), *map(float, p), *map(float, v)) for t, p, v in zip(ephemeris.t, ephemeris.position, ephemeris.velocity)]


def ground_track_rows(points):
    return [(p.t, math.degrees(p.lat), math.degrees(p.lon), p.alt) for p in points]


def conjunction_rows(events):
    return [(e.object_id, e.name or "", e.t_closest, e.miss_distance, e.relative_speed) for e in events]


def write_profile_csv(path, stations) -> Path:
    return atomic_write(path, csv_text(PROFILE_HEADER, profile_rows(stations)))


def write_stress_csv(path, stations) -> Path:
    return atomic_write(path, csv_text(STRESS_HEADER, stress_rows(stations)))


def write_ephemeris_csv(path, ephemeris) -> Path:
    return atomic_write(path, csv_text(EPHEMERIS_HEADER, ephemeris_rows(ephemeris)))


def write_ground_track_csv(path, points) -> Path:
    return atomic_write(path, csv_text(GROUND_TRACK_HEADER, ground_track_rows(points)))


def write_conjunction_csv(path, events) -> Path:
    return atomic_write(path, csv_text(CONJUNCTION_HEADER, conjunction_rows(events)))


def read_csv(path) -> tuple[list[str], list[list[float]]]:
    """Header and float rows of a numeric CSV written by this module."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [[float(x) for x in row] for row in reader]
