import math
import random
from datetime import datetime, timedelta, timezone

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coldgas.astro import MU_EARTH
from coldgas.errors import DomainError, TleChecksumError, TleConsistencyError, TleFormatError
from coldgas.kepler import solve_kepler
from coldgas.propagate import StateVector, propagate, simulate_deorbit
from coldgas.tle import (
    TleRecord,
    checksum,
    elements,
    parse_tle,
    read_catalog,
    record_from_state,
    screen_conjunctions,
    serialize_tle,
    tle_to_state,
)

ISS1 = "1 25544U 98067A   08264.51782528 -.00002182  00000-0 -11606-4 0  2927"
ISS2 = "2 25544  51.6416 247.4627 0006703 130.5360 325.0288 15.72125391563537"
EPOCH = datetime(2024, 3, 1, tzinfo=timezone.utc)


def oracle_checksum(line):
    # independent per-character sum over the payload columns
    values = {str(d): d for d in range(10)}
    values["-"] = 1
    return sum(values.get(ch, 0) for ch in line[:68]) % 10


def with_checksum_digit(line, digit):
    return line[:68] + str(digit)


def test_checksum_trivial_payloads():
    assert checksum("0" * 68) == 0
    assert checksum("1-1".ljust(68)) == 3


def test_checksum_reference_lines():
    assert checksum(ISS1) == int(ISS1[68]) == oracle_checksum(ISS1)
    assert checksum(ISS2) == int(ISS2[68]) == oracle_checksum(ISS2)


@given(st.text(alphabet="0123456789-+. ABCXYZ", min_size=68, max_size=69))
def test_checksum_matches_oracle(line):
    assert checksum(line) == oracle_checksum(line)


@given(st.text(alphabet="0123456789- ABC", min_size=68, max_size=68), st.data())
def test_checksum_ignores_letters(line, data):
    letters = [i for i, ch in enumerate(line) if ch.isalpha()]
    if not letters:
        return
    i = data.draw(st.sampled_from(letters))
    other = data.draw(st.sampled_from("ABCDEFGHIJKLMNOPQRSTUVWXYZ"))
    assert checksum(line[:i] + other + line[i + 1 :]) == checksum(line)


def test_parse_reference_record():
    r = parse_tle(ISS1, ISS2, "ISS (ZARYA)")
    assert r.catalog_number == 25544
    assert r.name == "ISS (ZARYA)"
    assert r.intl_designator == "98067A"
    assert r.eccentricity == 0.0006703
    assert r.inclination == 51.6416
    assert r.mean_motion == 15.72125391
    assert r.mean_motion_dot == -0.00002182
    assert r.bstar == pytest.approx(-0.11606e-4, rel=1e-15)
    assert r.mean_motion_ddot == 0.0
    assert r.rev_number == 56353 and r.element_set_number == 292
    assert r.epoch == datetime(2008, 1, 1, tzinfo=timezone.utc) + timedelta(days=263.51782528)
    assert serialize_tle(r) == (ISS1, ISS2)


def test_corrupted_checksum():
    bad = with_checksum_digit(ISS1, (int(ISS1[68]) + 1) % 10)
    with pytest.raises(TleChecksumError) as info:
        parse_tle(bad, ISS2)
    assert info.value.line_number == 1
    with pytest.raises(TleChecksumError) as info:
        parse_tle(ISS1, with_checksum_digit(ISS2, (int(ISS2[68]) + 3) % 10))
    assert info.value.line_number == 2


def test_wrong_length():
    with pytest.raises(TleFormatError):
        parse_tle(ISS1[:-1], ISS2)
    with pytest.raises(TleFormatError):
        parse_tle(ISS1, ISS2 + "0")


def test_catalog_mismatch():
    payload = ISS2[:2] + "25545" + ISS2[7:68]
    with pytest.raises(TleConsistencyError):
        parse_tle(ISS1, payload + str(checksum(payload)))


def test_swapped_lines():
    with pytest.raises(TleFormatError):
        parse_tle(ISS2, ISS1)


def test_mean_motion_columns():
    r = TleRecord(12345, 2024, 100.5, 51.6, 10.0, 0.001, 20.0, 30.0, 15.5)
    _, line2 = serialize_tle(r)
    assert line2[52:63] == "15.50000000"
    assert line2[68] == str(oracle_checksum(line2))


def test_unprintable_field():
    with pytest.raises(DomainError):
        serialize_tle(TleRecord(123456, 2024, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 15.0))
    with pytest.raises(DomainError):
        serialize_tle(TleRecord(1, 2024, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 15.0, bstar=1e-20))


def _fixed(lo, hi, places):
    scale = 10**places
    return st.integers(round(lo * scale), round(hi * scale)).map(lambda k: k / scale)


def _exponential():
    nonzero = st.builds(
        lambda sign, m, e: float(f"{sign}0.{m}e{e}"),
        st.sampled_from(["", "-"]),
        st.integers(10000, 99999),
        st.integers(-9, 9),
    )
    return st.one_of(st.just(0.0), nonzero)


canonical_records = st.builds(
    TleRecord,
    catalog_number=st.integers(0, 99999),
    epoch_year=st.integers(1957, 2056),
    epoch_day=_fixed(1, 366.99999999, 8),
    inclination=_fixed(0, 180, 4),
    raan=_fixed(0, 359.9999, 4),
    eccentricity=st.integers(0, 9999999).map(lambda k: k / 1e7),
    arg_perigee=_fixed(0, 359.9999, 4),
    mean_anomaly=_fixed(0, 359.9999, 4),
    mean_motion=_fixed(0.5, 17, 8),
    classification=st.sampled_from("UCS"),
    intl_designator=st.from_regex(r"[0-9]{5}[A-Z]{1,3}", fullmatch=True),
    mean_motion_dot=_fixed(-0.99999999, 0.99999999, 8),
    mean_motion_ddot=_exponential(),
    bstar=_exponential(),
    ephemeris_type=st.integers(0, 9),
    element_set_number=st.integers(0, 9999),
    rev_number=st.integers(0, 99999),
)


@settings(max_examples=300)
@given(canonical_records)
def test_round_trip_byte_exact(record):
    line1, line2 = serialize_tle(record)
    assert len(line1) == len(line2) == 69
    parsed = parse_tle(line1, line2)
    assert parsed == record
    assert serialize_tle(parsed) == (line1, line2)
    assert int(line1[68]) == oracle_checksum(line1)
    assert int(line2[68]) == oracle_checksum(line2)


def test_circular_equatorial_radius_constant():
    r = TleRecord(1, 2024, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 15.0)
    a = elements(r).a
    for t in np.linspace(0, 20000, 37):
        assert tle_to_state(r, t).radius == pytest.approx(a, rel=1e-12)


@given(st.floats(0.0, 0.7), st.floats(0.0, 20000.0), st.floats(0.0, 359.0))
def test_orbit_equation_along_track(e, t, m_deg):
    r = TleRecord(2, 2024, 1.0, 40.0, 10.0, e, 60.0, m_deg, 14.0)
    el = elements(r)
    m = el.mean_anomaly + r.mean_motion_rad_s * t
    big_e = solve_kepler(m, e)
    assert tle_to_state(r, t).radius == pytest.approx(el.a * (1 - e * math.cos(big_e)), rel=1e-9)


def test_mean_motion_for_reference_radius():
    # n for a = 6970 km, frozen from 40-digit evaluation
    r = record_from_state(StateVector.of(0, [6.97e6, 0, 0], [0, math.sqrt(MU_EARTH / 6.97e6), 0]), 1, EPOCH)
    assert r.mean_motion == pytest.approx(14.919468579292060, rel=1e-12)
    assert elements(r).a == pytest.approx(6.97e6, rel=1e-12)


def test_read_catalog_counts_skipped():
    bad2 = with_checksum_digit(ISS2, (int(ISS2[68]) + 1) % 10)
    text = "\n".join(["ISS (ZARYA)", ISS1, ISS2, "", "0 BROKEN", ISS1, bad2, ISS1, "", ISS1, ISS2]) + "\n"
    records, skipped = read_catalog(text)
    assert len(records) == 2 and skipped == 2
    assert records[0].name == "ISS (ZARYA)"
    assert records[1].name is None


# --- screening -----------------------------------------------------------


def circular_state(r, inclination=0.0, phase=0.0):
    v = math.sqrt(MU_EARTH / r)
    c, s = math.cos(phase), math.sin(phase)
    ci, si = math.cos(inclination), math.sin(inclination)
    return StateVector.of(0.0, [r * c, r * s * ci, r * s * si], [-v * s, v * c * ci, v * c * si])


@pytest.fixture(scope="module")
def trajectory():
    return propagate(circular_state(6.97e6), 3000.0, 1.0)


def test_empty_catalog(trajectory):
    rep = screen_conjunctions(trajectory, [])
    assert rep.events == () and rep.objects_screened == 0


def test_self_conjunction():
    # an object left on the deorbiter's initial orbit separates from it after the first burn
    traj = simulate_deorbit(6.97e6, 6.77e6, final_orbits=0.1).ephemeris
    me = record_from_state(circular_state(6.97e6), 90001, EPOCH, name="SELF")
    rep = screen_conjunctions(traj, [me], start_epoch=EPOCH)
    first = min(rep.events, key=lambda ev: ev.t_closest)
    assert first.t_closest == pytest.approx(0.0, abs=1e-2)
    assert first.miss_distance < 1.0


@pytest.mark.parametrize("phase", [0.0, 0.7, 2.0, math.pi])
def test_concentric_coplanar_no_events(trajectory, phase):
    threshold = 5000.0
    other = record_from_state(circular_state(6.97e6 + 2 * threshold, phase=phase), 90002, EPOCH)
    rep = screen_conjunctions(trajectory, [other], threshold, start_epoch=EPOCH)
    assert rep.events == ()
    brute = min(
        np.linalg.norm(trajectory.position[k] - tle_to_state(other, t).position)
        for k, t in enumerate(trajectory.t)
    )
    assert brute >= 2 * threshold * (1 - 1e-6)


def _crossing_catalog():
    out = []
    for k, (inc, phase) in enumerate([(0.2, 0.0), (0.5, 0.0004), (1.0, -0.0003), (0.3, 1.5), (0.8, 0.0002)]):
        out.append(record_from_state(circular_state(6.97e6, inc, phase), 91000 + k, EPOCH))
    return out


def test_crossing_miss_distances(trajectory):
    threshold = 5000.0
    catalog = _crossing_catalog()
    rep = screen_conjunctions(trajectory, catalog, threshold, start_epoch=EPOCH)
    assert rep.events
    for ev in rep.events:
        assert ev.miss_distance <= threshold
        obj = next(r for r in catalog if r.object_id == ev.object_id)
        coarse = min(
            np.linalg.norm(trajectory.interpolate(t)[0] - tle_to_state(obj, t).position)
            for t in np.arange(0.0, 3000.0, 10.0)
            if abs(t - ev.t_closest) <= 10.0
        )
        assert ev.miss_distance <= coarse
        assert ev.relative_speed > 0


def test_screening_order_independent(trajectory):
    catalog = _crossing_catalog()
    shuffled = catalog[:]
    random.Random(7).shuffle(shuffled)
    a = screen_conjunctions(trajectory, catalog, start_epoch=EPOCH)
    b = screen_conjunctions(trajectory, shuffled, start_epoch=EPOCH)
    assert a == b


def test_screening_accepts_line_groups(trajectory):
    rep = screen_conjunctions(trajectory, [(ISS1, ISS2), (ISS1[:-1], ISS2)])
    assert rep.objects_screened == 1 and rep.skipped == 1


def test_screening_validates_arguments(trajectory):
    with pytest.raises(DomainError):
        screen_conjunctions(trajectory, [], threshold=0)
    with pytest.raises(DomainError):
        screen_conjunctions(trajectory, [], coarse_step=-1)
