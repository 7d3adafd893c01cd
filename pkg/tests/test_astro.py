import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coldgas.astro import (
    EARTH,
    MU_EARTH,
    Body,
    CircularOrbit,
    circular_velocity,
    plan_hohmann,
    size_propellant,
    specific_energy,
)
from coldgas.errors import DomainError

MU_KM = 398600.0  # km^3/s^2
radii = st.floats(min_value=6.5e6, max_value=5e7)


def test_circular_velocity_table_values():
    assert circular_velocity(6_970_000, 3.986e14) == pytest.approx(7562.3, abs=0.05)
    assert circular_velocity(6_770_000, 3.986e14) == pytest.approx(7673.2, abs=0.05)
    assert circular_velocity(1, 1) == 1


@pytest.mark.parametrize("r, mu", [(0, 1), (-1, 1), (1, 0), (1, -3)])
def test_circular_velocity_rejects_nonpositive(r, mu):
    with pytest.raises(DomainError):
        circular_velocity(r, mu)


def test_specific_energy_values():
    assert specific_energy(6_870_000) / 1e6 == pytest.approx(-29.0102, abs=5e-5)
    assert specific_energy(6_970_000) / 1e6 == pytest.approx(-28.5940, abs=5e-5)
    assert abs(specific_energy(1e20)) < 1e-5
    with pytest.raises(DomainError):
        specific_energy(0.0)


def test_plan_hohmann_reference_case_km_units():
    plan = plan_hohmann(6970.0, 6770.0, MU_KM)
    assert plan.dv_total == pytest.approx(0.1109, abs=1e-4)
    assert plan.tof == pytest.approx(2833.5, abs=0.1)
    assert plan.v_t1 == pytest.approx(7.5070, abs=1e-4)
    assert plan.v_t2 == pytest.approx(7.7288, abs=1e-4)
    # exact impulses at these radii; the tabulated 0.05529 / 0.05561 are not reachable
    assert plan.dv1 == pytest.approx(0.055240121, abs=1e-9)
    assert plan.dv2 == pytest.approx(0.055643666, abs=1e-9)


def test_plan_hohmann_golden_7000_to_6800():
    # frozen from a 40-digit mpmath evaluation of vis-viva and half the transfer period
    plan = plan_hohmann(7_000_000.0, 6_800_000.0, 3.986e14)
    golden = {
        "a_transfer": 6900000.0,
        "eps_transfer": -28884057.971014493,
        "eps_orbit1": -28471428.571428571,
        "eps_orbit2": -29308823.529411765,
        "v_orbit1": 7546.0491081662822,
        "v_orbit2": 7656.2162364201502,
        "v_t1": 7491.1680226574347,
        "v_t2": 7711.4964939120651,
        "dv1": 54.881085508847485,
        "dv2": 55.280257491914931,
        "dv_total": 110.16134300076242,
        "tof": 2852.0350707258028,
    }
    for name, value in golden.items():
        assert getattr(plan, name) == pytest.approx(value, rel=1e-12), name
    assert plan.is_descent and plan.burn_sign == -1.0


def test_plan_hohmann_degenerate():
    r = 7_000_000.0
    plan = plan_hohmann(r, r)
    assert plan.dv1 == 0 and plan.dv2 == 0 and plan.dv_total == 0
    assert plan.tof == pytest.approx(0.5 * CircularOrbit(r).period, rel=1e-14)


def test_plan_hohmann_ascent_is_prograde():
    plan = plan_hohmann(6.77e6, 6.97e6)
    assert not plan.is_descent and plan.burn_sign == 1.0
    assert plan.v_t1 > plan.v_orbit1 and plan.v_t2 < plan.v_orbit2


@pytest.mark.parametrize("r1, r2", [(0, 1e7), (1e7, -1)])
def test_plan_hohmann_rejects_bad_radii(r1, r2):
    with pytest.raises(DomainError):
        plan_hohmann(r1, r2)


@given(radii)
def test_vis_viva_consistency(r):
    v = circular_velocity(r)
    assert v**2 / 2 - MU_EARTH / r == pytest.approx(specific_energy(r), rel=1e-12)


@given(radii, radii)
def test_hohmann_symmetry(r1, r2):
    a, b = plan_hohmann(r1, r2), plan_hohmann(r2, r1)
    assert a.dv_total == pytest.approx(b.dv_total, rel=1e-12, abs=1e-9)
    assert a.tof == pytest.approx(b.tof, rel=1e-12)


@given(radii, radii)
def test_hohmann_invariants(r1, r2):
    p = plan_hohmann(r1, r2)
    assert p.a_transfer == pytest.approx((r1 + r2) / 2, rel=1e-15)
    assert p.dv_total == p.dv1 + p.dv2
    assert p.dv1 >= 0 and p.dv2 >= 0 and p.tof > 0
    assert max(p.eps_transfer, p.eps_orbit1, p.eps_orbit2) < 0


@given(st.floats(min_value=6.6e6, max_value=4e7), st.floats(min_value=1e3, max_value=5e6))
def test_descent_burns_are_retrograde(r2, gap):
    p = plan_hohmann(r2 + gap, r2)
    assert p.v_t1 < p.v_orbit1 and p.v_t2 > p.v_orbit2


def test_size_propellant_examples():
    none = size_propellant(0.0, 500.0, 10.0)
    assert none.mass_ratio == 1 and none.m_propellant == 0
    half = size_propellant(300.0 * math.log(2), 300.0, 2.0)
    assert half.m_final == pytest.approx(1.0, rel=1e-14)
    # u_eq is the exit velocity of the reference nozzle; frozen by direct mpmath exponential
    b = size_propellant(110.9, 529.9, 10.0)
    assert b.mass_ratio == pytest.approx(1.2327960127462274, rel=1e-12)
    assert b.m_propellant == pytest.approx(1.8883579305844878, rel=1e-12)
    assert b.mass_ratio == pytest.approx(1.2329, abs=1e-3)
    assert b.m_propellant == pytest.approx(1.889, abs=1e-3)


@pytest.mark.parametrize("dv, u, m", [(10, 0, 1), (10, -1, 1), (-1, 100, 1), (1, 100, 0)])
def test_size_propellant_domain(dv, u, m):
    with pytest.raises(DomainError):
        size_propellant(dv, u, m)


@given(st.floats(0, 500), st.floats(0, 500), st.floats(100, 3000))
def test_rocket_equation_additive(dv1, dv2, u):
    total = size_propellant(dv1 + dv2, u, 10.0).mass_ratio
    parts = size_propellant(dv1, u, 10.0).mass_ratio * size_propellant(dv2, u, 10.0).mass_ratio
    assert total == pytest.approx(parts, rel=1e-12)


def test_body_and_orbit_validation():
    with pytest.raises(DomainError):
        Body(mu=-1.0)
    with pytest.raises(DomainError):
        CircularOrbit(EARTH.radius - 1)
    orbit = CircularOrbit.from_altitude(600e3)
    assert orbit.r == 6_970_000 and orbit.altitude == pytest.approx(600e3)
