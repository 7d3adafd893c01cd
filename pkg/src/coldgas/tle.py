"""Two-line element sets: parsing, serialization, Keplerian states, screening.

States derived from TLEs here use two-body Keplerian motion of the mean
elements, not SGP4. Positions are good to kilometres over a few orbits,
which is adequate for coarse conjunction screening only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Iterable, Sequence

import numpy as np

from coldgas.astro import MU_EARTH
from coldgas.errors import DomainError, TleChecksumError, TleConsistencyError, TleFormatError
from coldgas.kepler import KeplerElements, elements_to_state, semi_major_axis, state_to_elements
from coldgas.propagate import Ephemeris, StateVector

LINE_LENGTH = 69
SECONDS_PER_DAY = 86400.0
_GOLDEN = (math.sqrt(5) - 1) / 2
REFINE_TOL = 1e-3  # s


@dataclass(frozen=True)
class TleRecord:
    """Parsed two-line element set.

    Angles are degrees, ``mean_motion`` is rev/day, ``mean_motion_dot`` is
    the printed first derivative (rev/day^2 halved) and ``bstar`` is in
    inverse Earth radii. ``epoch_year`` is the full four-digit year.
    """

    catalog_number: int
    epoch_year: int
    epoch_day: float
    inclination: float
    raan: float
    eccentricity: float
    arg_perigee: float
    mean_anomaly: float
    mean_motion: float
    name: str | None = None
    classification: str = "U"
    intl_designator: str = ""
    mean_motion_dot: float = 0.0
    mean_motion_ddot: float = 0.0
    bstar: float = 0.0
    ephemeris_type: int = 0
    element_set_number: int = 999
    rev_number: int = 0
    checksum1: int | None = field(default=None, compare=False)
    checksum2: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if not 0 <= self.eccentricity < 1:
            raise DomainError(f"eccentricity must satisfy 0 <= e < 1, got {self.eccentricity}")
        if not 0 <= self.inclination <= 180:
            raise DomainError(f"inclination must lie in [0, 180] deg, got {self.inclination}")
        if not self.mean_motion > 0:
            raise DomainError(f"mean motion must be positive, got {self.mean_motion}")

    @property
    def object_id(self) -> str:
        return f"{self.catalog_number:05d}"

    @property
    def epoch(self) -> datetime:
        start = datetime(self.epoch_year, 1, 1, tzinfo=timezone.utc)
        return start + timedelta(days=self.epoch_day - 1)

    @property
    def mean_motion_rad_s(self) -> float:
        return self.mean_motion * 2 * math.pi / SECONDS_PER_DAY


@dataclass(frozen=True)
class ConjunctionEvent:
    t_closest: float
    miss_distance: float
    object_id: str
    relative_speed: float
    name: str | None = None


@dataclass(frozen=True)
class ScreeningReport:
    events: tuple[ConjunctionEvent, ...]
    objects_screened: int
    skipped: int
    threshold: float
    coarse_step: float


def checksum(line: str) -> int:
    """Modulo-10 checksum: digits count their value, '-' counts 1, all else 0.

    Only the first 68 columns are summed, so a full 69-column line can be
    passed directly.
    """
    total = 0
    for ch in line[:68]:
        if ch.isdigit():
            total += int(ch)
        elif ch == "-":
            total += 1
    return total % 10


def _field(line: str, first: int, last: int) -> str:
    # 1-indexed inclusive columns
    return line[first - 1 : last]


def _float(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise TleFormatError(f"cannot read {what} from {text!r}") from None


def _int(text: str, what: str, blank: int | None = None) -> int:
    if not text.strip() and blank is not None:
        return blank
    try:
        return int(text)
    except ValueError:
        raise TleFormatError(f"cannot read {what} from {text!r}") from None


def _decode_exponential(text: str, what: str) -> float:
    # " 12345-3" means +0.12345e-3
    text = text.strip()
    if not text:
        return 0.0
    sign = ""
    if text[0] in "+-":
        sign, text = ("-" if text[0] == "-" else ""), text[1:]
    if len(text) < 2 or text[-2] not in "+-":
        raise TleFormatError(f"cannot read {what} from {text!r}")
    mantissa, exponent = text[:-2], text[-2:]
    if not mantissa.isdigit() or not exponent[1].isdigit():
        raise TleFormatError(f"cannot read {what} from {text!r}")
    return float(f"{sign}0.{mantissa}e{exponent}")


def _encode_exponential(value: float, what: str) -> str:
    if value == 0:
        return " 00000-0"
    mant, exp = f"{abs(value):.4e}".split("e")
    digits = mant.replace(".", "")
    exponent = int(exp) + 1
    if not -9 <= exponent <= 9:
        raise DomainError(f"{what} {value} cannot be printed in TLE exponential form")
    sign = "-" if value < 0 else " "
    return f"{sign}{digits}{'-' if exponent < 0 else '+'}{abs(exponent)}"


def _encode_ndot(value: float) -> str:
    if abs(value) >= 1:
        raise DomainError(f"mean motion derivative {value} does not fit the TLE field")
    text = f"{abs(value):.8f}"[1:]
    return ("-" if value < 0 else " ") + text


def _check_line(line: str, number: str) -> str:
    line = line.rstrip("\r\n")
    if len(line) != LINE_LENGTH:
        raise TleFormatError(f"TLE line {number} must be {LINE_LENGTH} characters, got {len(line)}")
    if line[0] != number:
        raise TleFormatError(f"TLE line {number} must start with {number!r}, got {line[0]!r}")
    found = line[68]
    if not found.isdigit():
        raise TleFormatError(f"TLE line {number} checksum column holds {found!r}")
    expected = checksum(line)
    if int(found) != expected:
        raise TleChecksumError(int(number), expected, int(found))
    return line


def parse_tle(line1: str, line2: str, name: str | None = None) -> TleRecord:
    """Parse one element set.

    Raises:
        TleFormatError: wrong length, wrong line number or unreadable field.
        TleChecksumError: a checksum digit disagrees with the payload.
        TleConsistencyError: the two lines carry different catalog numbers.
    """
    l1 = _check_line(line1, "1")
    l2 = _check_line(line2, "2")
    cat1 = _int(_field(l1, 3, 7), "catalog number")
    cat2 = _int(_field(l2, 3, 7), "catalog number")
    if cat1 != cat2:
        raise TleConsistencyError(f"catalog numbers differ between lines: {cat1} vs {cat2}")

    epoch = _field(l1, 19, 32)
    yy = _int(epoch[:2], "epoch year")
    ecc_text = _field(l2, 27, 33)
    if not ecc_text.strip().isdigit():
        raise TleFormatError(f"cannot read eccentricity from {ecc_text!r}")
    try:
        return TleRecord(
            name=name.strip() if name else None,
            catalog_number=cat1,
            classification=l1[7],
            intl_designator=_field(l1, 10, 17).rstrip(),
            epoch_year=1900 + yy if yy >= 57 else 2000 + yy,
            epoch_day=_float(epoch[2:], "epoch day"),
            mean_motion_dot=_float(_field(l1, 34, 43), "mean motion derivative"),
            mean_motion_ddot=_decode_exponential(_field(l1, 45, 52), "mean motion second derivative"),
            bstar=_decode_exponential(_field(l1, 54, 61), "bstar"),
            ephemeris_type=_int(l1[62], "ephemeris type", blank=0),
            element_set_number=_int(_field(l1, 65, 68), "element set number", blank=0),
            inclination=_float(_field(l2, 9, 16), "inclination"),
            raan=_float(_field(l2, 18, 25), "right ascension of node"),
            eccentricity=float("0." + ecc_text.strip()),
            arg_perigee=_float(_field(l2, 35, 42), "argument of perigee"),
            mean_anomaly=_float(_field(l2, 44, 51), "mean anomaly"),
            mean_motion=_float(_field(l2, 53, 63), "mean motion"),
            rev_number=_int(_field(l2, 64, 68), "revolution number", blank=0),
            checksum1=int(l1[68]),
            checksum2=int(l2[68]),
        )
    except DomainError as exc:
        raise TleFormatError(str(exc)) from None


def _fits(text: str, width: int, what: str) -> str:
    if len(text) != width:
        raise DomainError(f"{what} {text.strip()!r} does not fit a {width}-column TLE field")
    return text


def serialize_tle(record: TleRecord) -> tuple[str, str]:
    """Canonical 69-column lines with freshly computed checksums."""
    r = record
    if not 0 <= r.catalog_number <= 99999:
        raise DomainError(f"catalog number {r.catalog_number} out of range")
    if len(r.classification) != 1:
        raise DomainError(f"classification must be one character, got {r.classification!r}")
    if len(r.intl_designator) > 8:
        raise DomainError(f"international designator {r.intl_designator!r} longer than 8 characters")
    day = f"{r.epoch_day:012.8f}"
    epoch = f"{r.epoch_year % 100:02d}" + _fits(day, 12, "epoch day")
    payload1 = (
        f"1 {r.catalog_number:05d}{r.classification} {r.intl_designator:<8} {epoch} "
        f"{_encode_ndot(r.mean_motion_dot)} "
        f"{_encode_exponential(r.mean_motion_ddot, 'mean motion second derivative')} "
        f"{_encode_exponential(r.bstar, 'bstar')} "
        f"{_fits(str(r.ephemeris_type), 1, 'ephemeris type')} "
        f"{_fits(f'{r.element_set_number:4d}', 4, 'element set number')}"
    )
    ecc = round(r.eccentricity * 1e7)
    if ecc > 9999999:
        raise DomainError(f"eccentricity {r.eccentricity} rounds out of the TLE field")
    payload2 = (
        f"2 {r.catalog_number:05d} "
        f"{_fits(f'{r.inclination:8.4f}', 8, 'inclination')} "
        f"{_fits(f'{r.raan:8.4f}', 8, 'raan')} "
        f"{ecc:07d} "
        f"{_fits(f'{r.arg_perigee:8.4f}', 8, 'argument of perigee')} "
        f"{_fits(f'{r.mean_anomaly:8.4f}', 8, 'mean anomaly')} "
        f"{_fits(f'{r.mean_motion:11.8f}', 11, 'mean motion')}"
        f"{_fits(f'{r.rev_number:5d}', 5, 'revolution number')}"
    )
    return payload1 + str(checksum(payload1)), payload2 + str(checksum(payload2))


def elements(record: TleRecord, mu: float = MU_EARTH) -> KeplerElements:
    return KeplerElements(
        a=semi_major_axis(record.mean_motion_rad_s, mu),
        e=record.eccentricity,
        i=math.radians(record.inclination),
        raan=math.radians(record.raan),
        argp=math.radians(record.arg_perigee),
        mean_anomaly=math.radians(record.mean_anomaly),
    )


def tle_to_state(record: TleRecord, t_offset: float = 0.0, mu: float = MU_EARTH) -> StateVector:
    """Two-body state ``t_offset`` seconds after the element epoch."""
    el = elements(record, mu)
    n = record.mean_motion_rad_s
    pos, vel = elements_to_state(el._replace(mean_anomaly=el.mean_anomaly + n * t_offset), mu)
    return StateVector(float(t_offset), pos, vel)


def record_from_state(
    state: StateVector,
    catalog_number: int,
    epoch: datetime,
    mu: float = MU_EARTH,
    name: str | None = None,
) -> TleRecord:
    """Mean-element record whose Keplerian motion passes through ``state`` at ``epoch``.

    Fields keep full float precision; serializing the record rounds them to
    TLE resolution.
    """
    el = state_to_elements(state.position, state.velocity, mu)
    n = math.sqrt(mu / el.a**3)
    start = datetime(epoch.year, 1, 1, tzinfo=epoch.tzinfo)
    return TleRecord(
        name=name,
        catalog_number=catalog_number,
        epoch_year=epoch.year,
        epoch_day=(epoch - start).total_seconds() / SECONDS_PER_DAY + 1,
        inclination=math.degrees(el.i),
        raan=math.degrees(el.raan),
        eccentricity=el.e,
        arg_perigee=math.degrees(el.argp),
        mean_anomaly=math.degrees(el.mean_anomaly),
        mean_motion=n * SECONDS_PER_DAY / (2 * math.pi),
    )


def read_catalog(text: str) -> tuple[list[TleRecord], int]:
    """Parse a catalog of 2- or 3-line groups.

    Returns the parsed records and the number of groups that failed to
    parse. A name line may carry the ``0 `` prefix used by 3LE files.
    """
    records: list[TleRecord] = []
    skipped = 0
    name = None
    pending = None
    for raw in text.splitlines():
        line = raw.rstrip()
        if not line:
            continue
        if line.startswith("1 "):
            if pending is not None:
                # previous line 1 never got its line 2
                skipped += 1
                name = None
            pending = raw.rstrip("\r\n")
            continue
        if line.startswith("2 ") and pending is not None:
            try:
                records.append(parse_tle(pending, raw.rstrip("\r\n"), name))
            except TleFormatError:
                skipped += 1
            pending = None
            name = None
            continue
        if pending is not None:
            # line 1 without a following line 2
            skipped += 1
            pending = None
        name = line[2:].strip() if line.startswith("0 ") else line.strip()
    if pending is not None:
        skipped += 1
    return records, skipped


def _golden_min(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = f(d)
    t = 0.5 * (lo + hi)
    return t, f(t)


def _screen_one(ephemeris: Ephemeris, record: TleRecord, offset: float, threshold: float, times: np.ndarray, mu: float):
    def obj_state(t):
        return tle_to_state(record, t + offset, mu)

    def separation(t):
        pos, _ = ephemeris.interpolate(t)
        return float(np.linalg.norm(pos - obj_state(t).position))

    d = np.array([separation(t) for t in times])
    events = []
    n = len(d)
    for k in range(n):
        left = d[k - 1] if k > 0 else math.inf
        right = d[k + 1] if k < n - 1 else math.inf
        if not (d[k] <= left and d[k] <= right) or d[k] >= 3 * threshold:
            continue
        # plateaus: keep only the first sample of equal minima
        if k > 0 and d[k] == left:
            continue
        lo = times[max(k - 1, 0)]
        hi = times[min(k + 1, n - 1)]
        t_best, d_best = float(times[k]), float(d[k])
        if hi > lo:
            t_ref, d_ref = _golden_min(separation, lo, hi, REFINE_TOL)
            if d_ref < d_best:
                t_best, d_best = t_ref, d_ref
        if d_best < threshold:
            _, v_dep = ephemeris.interpolate(t_best)
            v_rel = float(np.linalg.norm(v_dep - obj_state(t_best).velocity))
            events.append(ConjunctionEvent(t_best, d_best, record.object_id, v_rel, record.name))
    return events


def screen_conjunctions(
    ephemeris: Ephemeris,
    catalog: Iterable[TleRecord | Sequence[str]],
    threshold: float = 5000.0,
    coarse_step: float = 10.0,
    start_epoch: datetime | None = None,
    mu: float = MU_EARTH,
) -> ScreeningReport:
    """Close approaches between a trajectory and catalog objects.

    Separation is sampled every ``coarse_step`` seconds; each local minimum
    under three times ``threshold`` is refined by golden-section search and
    reported when below ``threshold``.

    ``start_epoch`` is the absolute time of ``ephemeris`` t=0. When omitted,
    every element set is taken to have its epoch at t=0.

    Catalog entries may be records or ``(line1, line2[, name])`` groups;
    groups that fail to parse are counted in ``skipped``.
    """
    if not threshold > 0:
        raise DomainError(f"threshold must be positive, got {threshold}")
    if not coarse_step > 0:
        raise DomainError(f"coarse step must be positive, got {coarse_step}")
    records = []
    skipped = 0
    for entry in catalog:
        if isinstance(entry, TleRecord):
            records.append(entry)
            continue
        try:
            records.append(parse_tle(*entry))
        except (TleFormatError, TypeError):
            skipped += 1

    t0, t1 = float(ephemeris.t[0]), float(ephemeris.t[-1])
    n_steps = int(math.floor((t1 - t0) / coarse_step))
    times = t0 + coarse_step * np.arange(n_steps + 1)
    if times[-1] < t1:
        times = np.append(times, t1)

    if start_epoch is not None and start_epoch.tzinfo is None:
        start_epoch = start_epoch.replace(tzinfo=timezone.utc)
    events = []
    for record in sorted(records, key=lambda r: (r.catalog_number, r.epoch_year, r.epoch_day)):
        offset = 0.0 if start_epoch is None else (start_epoch - record.epoch).total_seconds()
        events.extend(_screen_one(ephemeris, record, offset, threshold, times, mu))
    events.sort(key=lambda e: (e.miss_distance, e.object_id, e.t_closest))
    return ScreeningReport(tuple(events), len(records), skipped, threshold, coarse_step)
