"""Matplotlib figures for the mission report.

Each function renders one figure to a PNG file next to the CSV it was
drawn from. The Agg backend is forced so rendering works headless.
"""

from __future__ import annotations

import io
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from coldgas.export import atomic_write  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.4,
    "savefig.dpi": 120,
}


def _size(scale=1.0):
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    width = 6.4 * scale
    return width, width * golden


def _save(fig, path):
    buf = io.BytesIO()
    # no creation timestamp so identical inputs give identical files
    fig.savefig(buf, format="png", bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)
    return atomic_write(path, buf.getvalue())


def nozzle_profile_figure(stations, path, x_throat=None):
    """Centreline Mach, pressure and temperature along the nozzle."""
    x = np.array([s.x for s in stations]) * 1e3
    series = [
        ([s.mach for s in stations], "Mach number", "C0"),
        ([s.p / 1e5 for s in stations], "static pressure [bar]", "C1"),
        ([s.t for s in stations], "static temperature [K]", "C3"),
    ]
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(3, 1, sharex=True, figsize=(_size()[0], 6.0))
        for ax, (y, label, color) in zip(axes, series):
            ax.plot(x, y, color=color)
            ax.set_ylabel(label)
            if x_throat is not None:
                ax.axvline(x_throat * 1e3, color="0.5", ls=":", lw=1)
        axes[-1].set_xlabel("axial position [mm]")
        axes[0].set_title("Quasi-1D isentropic nozzle flow")
        return _save(fig, path)


def hoop_stress_figure(stations, path):
    r = np.array([s.r for s in stations]) * 1e3
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=_size())
        ax.plot(r, [s.sigma_hoop / 1e6 for s in stations], label="hoop")
        ax.plot(r, [s.sigma_radial / 1e6 for s in stations], label="radial")
        ax.plot(r, [s.von_mises / 1e6 for s in stations], "--", label="von Mises")
        ax.set_xlabel("radius [mm]")
        ax.set_ylabel("stress [MPa]")
        ax.set_title("Stress through the tank wall")
        ax.legend()
        return _save(fig, path)


def ground_track_figure(points, path, burn_times=()):
    t = np.array([p.t for p in points]) / 60.0
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(3, 1, sharex=True, figsize=(_size()[0], 6.0))
        axes[0].plot(t, [math.degrees(p.lat) for p in points])
        axes[0].set_ylabel("latitude [deg]")
        axes[1].plot(t, [math.degrees(p.lon) for p in points], ".", ms=1)
        axes[1].set_ylabel("longitude [deg]")
        axes[2].plot(t, [p.alt / 1e3 for p in points])
        axes[2].set_ylabel("altitude [km]")
        axes[2].set_xlabel("time [min]")
        for ax in axes:
            for tb in burn_times:
                ax.axvline(tb / 60.0, color="C3", ls=":", lw=1)
        axes[0].set_title("Deorbit ground track (spherical Earth)")
        return _save(fig, path)


def orbit_figure(ephemeris, path, body_radius, burn_times=()):
    pos = ephemeris.position / 1e3
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 5.0))
        theta = np.linspace(0, 2 * np.pi, 361)
        ax.fill(body_radius / 1e3 * np.cos(theta), body_radius / 1e3 * np.sin(theta), color="0.85")
        ax.plot(pos[:, 0], pos[:, 1], lw=1)
        for tb in burn_times:
            p, _ = ephemeris.interpolate(tb)
            ax.plot(p[0] / 1e3, p[1] / 1e3, "o", color="C3", ms=4)
        ax.set_aspect("equal")
        ax.set_xlabel("x [km]")
        ax.set_ylabel("y [km]")
        ax.set_title("Hohmann deorbit (orbit plane projection)")
        return _save(fig, path)
