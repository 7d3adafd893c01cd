from coldgas import plotting
from coldgas.config import MissionConfig
from coldgas.report import run_mission

PNG = b"\x89PNG\r\n\x1a\n"


def test_figures_written(tmp_path):
    res = run_mission(MissionConfig(final_orbits=0.2, step_s=5.0))
    burns = [b.t for b in res.deorbit.burns]
    paths = [
        plotting.nozzle_profile_figure(res.profile, tmp_path / "n.png", res.geometry.x_throat),
        plotting.hoop_stress_figure(res.tank_profile, tmp_path / "t.png"),
        plotting.ground_track_figure(res.ground_track, tmp_path / "g.png", burns),
        plotting.orbit_figure(res.deorbit.ephemeris, tmp_path / "o.png", res.config.body.radius, burns),
    ]
    for p in paths:
        data = p.read_bytes()
        assert data.startswith(PNG) and len(data) > 5000


def test_figures_are_reproducible(tmp_path):
    res = run_mission(MissionConfig(final_orbits=0.2, step_s=5.0))
    a = plotting.hoop_stress_figure(res.tank_profile, tmp_path / "a.png").read_bytes()
    b = plotting.hoop_stress_figure(res.tank_profile, tmp_path / "b.png").read_bytes()
    assert a == b
