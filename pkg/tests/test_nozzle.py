import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coldgas.errors import DesignInfeasibleError, DomainError
from coldgas.nozzle import (
    AIR,
    BAR,
    SUBSONIC,
    SUPERSONIC,
    ChamberState,
    GasModel,
    NozzleGeometry,
    convergent_half_angle,
    design_nozzle,
    isentropic_ratios,
    mach_from_area_ratio,
    mach_from_pressure_ratio,
    performance,
    quasi1d_profile,
)

CHAMBER = ChamberState(1.0 * BAR, 290.0, AIR)
P_AMB = 0.1 * BAR
D_THROAT = 5e-3
D_INLET = 10e-3
DIV = math.radians(5.0)
CONV = convergent_half_angle(D_INLET, D_THROAT, 11.43e-3)


def _bisect(f, lo, hi, n=200):
    # plain oracle, independent of the library solver
    flo = f(lo)
    for _ in range(n):
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0) == (flo > 0):
            lo, flo = mid, f(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _area_ratio(m, g=1.4):
    return (1 / m) * ((2 / (g + 1)) * (1 + (g - 1) / 2 * m * m)) ** ((g + 1) / (2 * (g - 1)))


@pytest.fixture(scope="module")
def reference_nozzle():
    return design_nozzle(CHAMBER, P_AMB, D_THROAT, D_INLET, DIV, CONV)


def test_ratios_at_stagnation_and_sonic():
    r0 = isentropic_ratios(0.0)
    assert r0.t0_over_t == 1 and r0.p0_over_p == 1 and math.isinf(r0.a_over_astar)
    r1 = isentropic_ratios(1.0, 1.4)
    assert r1.t0_over_t == pytest.approx(1.2, rel=1e-15)
    assert r1.a_over_astar == 1.0
    assert r1.p0_over_p == pytest.approx(1.8929, abs=5e-5)
    assert isentropic_ratios(2.157).p0_over_p == pytest.approx(10.0, abs=0.1)


def test_ratios_domain():
    with pytest.raises(DomainError):
        isentropic_ratios(-0.1)
    with pytest.raises(DomainError):
        isentropic_ratios(1.0, 1.0)


def test_mach_from_pressure_ratio_values():
    assert mach_from_pressure_ratio(1.0) == 0.0
    assert mach_from_pressure_ratio(1.2**3.5) == pytest.approx(1.0, abs=1e-12)
    assert mach_from_pressure_ratio(1.8929) == pytest.approx(1.0, abs=1e-3)
    assert mach_from_pressure_ratio(10.0) == pytest.approx(math.sqrt(5 * (10 ** (2 / 7) - 1)), rel=1e-14)
    assert mach_from_pressure_ratio(10.0) == pytest.approx(2.1572, abs=1e-3)
    with pytest.raises(DomainError):
        mach_from_pressure_ratio(0.99)


def test_mach_from_area_ratio_against_bisection_oracle():
    target = (6.9559 / 5.0) ** 2
    sup = mach_from_area_ratio(target, SUPERSONIC)
    sub = mach_from_area_ratio(target, SUBSONIC)
    assert sup == pytest.approx(_bisect(lambda m: _area_ratio(m) - target, 1.0, 5.0), abs=1e-10)
    assert sub == pytest.approx(_bisect(lambda m: _area_ratio(m) - target, 0.01, 1.0), abs=1e-10)
    assert sup == pytest.approx(2.157, abs=5e-3)
    assert sub == pytest.approx(0.318, abs=5e-3)
    assert abs(_area_ratio(sup) - target) < 1e-10


def test_mach_from_area_ratio_edges():
    assert mach_from_area_ratio(1.0, SUBSONIC) == 1.0
    assert mach_from_area_ratio(1.0, SUPERSONIC) == 1.0
    with pytest.raises(DomainError):
        mach_from_area_ratio(0.9)
    with pytest.raises(DomainError):
        mach_from_area_ratio(2.0, "transonic")
    with pytest.raises(DomainError):
        mach_from_area_ratio(1e12, SUPERSONIC)


@settings(max_examples=300)
@given(st.one_of(st.floats(0.05, 0.99), st.floats(1.01, 6.0)))
def test_area_round_trip(m):
    branch = SUBSONIC if m < 1 else SUPERSONIC
    assert mach_from_area_ratio(isentropic_ratios(m).a_over_astar, branch) == pytest.approx(m, abs=1e-8)


@settings(max_examples=300)
@given(st.one_of(st.just(0.0), st.floats(1e-4, 6.0)), st.floats(1.05, 1.7))
def test_pressure_round_trip(m, gamma):
    back = mach_from_pressure_ratio(isentropic_ratios(m, gamma).p0_over_p, gamma)
    assert back == pytest.approx(m, abs=1e-10)


@given(st.floats(1e-7, 1e-4))
def test_pressure_round_trip_conditioning_near_rest(m):
    # p0/p - 1 ~ gamma M^2 / 2 is stored to one ulp of 1.0, so dM ~ ulp / (gamma M)
    back = mach_from_pressure_ratio(isentropic_ratios(m).p0_over_p)
    assert abs(back - m) <= 8 * 2.3e-16 / (1.4 * m)


def test_design_reference_nozzle(reference_nozzle):
    g = reference_nozzle
    assert g.d_exit * 1e3 == pytest.approx(6.9559, abs=0.01)
    # frozen from mpmath: 5 mm * sqrt(A/A*(M=2.15719...))
    assert g.d_exit * 1e3 == pytest.approx(6.947441510746388, rel=1e-12)
    assert g.a_throat == pytest.approx(1.9635e-5, abs=1e-9)
    assert g.a_throat == math.pi * D_THROAT**2 / 4
    assert g.len_convergent == pytest.approx(11.43e-3, rel=1e-12)
    assert g.len_divergent == pytest.approx((g.d_exit / 2 - D_THROAT / 2) / math.tan(DIV), rel=1e-14)


def test_design_sonic_limit():
    p0 = P_AMB * AIR.critical_pressure_ratio
    g = design_nozzle(ChamberState(p0, 290.0), P_AMB, D_THROAT, D_INLET, DIV, CONV)
    assert g.d_exit == D_THROAT
    g4 = design_nozzle(ChamberState(P_AMB * 1.8929, 290.0), P_AMB, D_THROAT, D_INLET, DIV, CONV)
    assert g4.d_exit == D_THROAT


def test_design_infeasible_names_critical_ratio():
    with pytest.raises(DesignInfeasibleError, match="1.8929"):
        design_nozzle(ChamberState(1.5 * P_AMB, 290.0), P_AMB, D_THROAT, D_INLET, DIV, CONV)


def test_geometry_validation():
    with pytest.raises(DomainError):
        NozzleGeometry(4e-3, 5e-3, 6e-3, 1e-2, 1e-2, DIV, CONV)
    with pytest.raises(DomainError):
        design_nozzle(CHAMBER, P_AMB, D_THROAT, D_INLET, 0.0, CONV)


def test_profile_throat_and_exit(reference_nozzle):
    prof = quasi1d_profile(reference_nozzle, CHAMBER, 101)
    assert len(prof) == 101
    throat = [s for s in prof if s.x == reference_nozzle.x_throat]
    assert len(throat) == 1 and throat[0].mach == 1.0
    exit_ = prof[-1]
    assert exit_.mach == pytest.approx(2.157, abs=1e-3)
    # frozen from the temperature relation at the exit Mach, 290 K stagnation
    assert exit_.t == pytest.approx(150.2047656977051, rel=1e-9)
    assert exit_.p == pytest.approx(0.1 * BAR, rel=1e-9)


def test_profile_invariants(reference_nozzle):
    prof = quasi1d_profile(reference_nozzle, CHAMBER, 151)
    mach = np.array([s.mach for s in prof])
    assert np.all(np.diff(mach) > 0)
    assert np.all(np.diff([s.p for s in prof]) < 0)
    assert np.all(np.diff([s.t for s in prof]) < 0)
    for s in prof:
        r = isentropic_ratios(s.mach)
        assert s.p * r.p0_over_p == pytest.approx(CHAMBER.p0, rel=1e-10)
        assert s.t * r.t0_over_t == pytest.approx(CHAMBER.t0, rel=1e-10)
    flux = [s.p / (AIR.r_specific * s.t) * s.v * s.area for s in prof]
    assert max(flux) / min(flux) - 1 < 1e-8


def test_profile_needs_three_samples(reference_nozzle):
    with pytest.raises(DomainError):
        quasi1d_profile(reference_nozzle, CHAMBER, 2)


def test_performance_reference(reference_nozzle):
    perf = performance(reference_nozzle, CHAMBER, P_AMB)
    # frozen from a 40-digit evaluation of the choked-flow and thrust closed forms
    assert perf.v_exit == pytest.approx(529.9515314755779, rel=1e-9)
    assert perf.mdot == pytest.approx(4.660260808890392e-3, rel=1e-12)
    assert perf.thrust == pytest.approx(2.469712352747079, rel=1e-9)
    assert perf.u_eq == pytest.approx(perf.v_exit, rel=1e-12)
    assert perf.v_exit == pytest.approx(529.9, abs=0.1)
    assert perf.mdot == pytest.approx(4.66e-3, abs=5e-6)
    assert perf.thrust == pytest.approx(2.47, abs=5e-3)


def test_performance_scales_with_chamber_pressure(reference_nozzle):
    base = performance(reference_nozzle, CHAMBER, 0.0)
    double = performance(reference_nozzle, ChamberState(2 * CHAMBER.p0, CHAMBER.t0), 0.0)
    assert double.mdot == pytest.approx(2 * base.mdot, rel=1e-14)
    assert double.thrust == pytest.approx(2 * base.thrust, rel=1e-14)
    assert double.v_exit == pytest.approx(base.v_exit, rel=1e-14)
    matched = performance(reference_nozzle, ChamberState(2 * CHAMBER.p0, CHAMBER.t0), 2 * P_AMB)
    assert matched.thrust == pytest.approx(2 * performance(reference_nozzle, CHAMBER, P_AMB).thrust, rel=1e-12)


def test_performance_monotone_in_p0(reference_nozzle):
    thrusts = [performance(reference_nozzle, ChamberState(p * BAR, 290.0), P_AMB).thrust for p in (0.5, 1, 2, 5, 10)]
    assert all(t >= 0 for t in thrusts)
    assert np.all(np.diff(thrusts) > 0)


def test_performance_unstarted(reference_nozzle):
    with pytest.raises(DomainError, match="unstarted"):
        performance(reference_nozzle, CHAMBER, 0.9 * BAR)


def test_gas_model_validation():
    with pytest.raises(DomainError):
        GasModel(gamma=1.0)
    with pytest.raises(DomainError):
        ChamberState(p0=0.0)
