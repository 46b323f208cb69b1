"""Rotating-panel ingestion: CSV parsing, wave linkage, synthetic panel generation.

Two CSV layouts are accepted.

pair_rows (the canonical interchange format), header::

    person_id,quarter_from,quarter_to,state_from,state_to,age,sex,citizen,region,weight

wave_rows (one row per interview), header::

    person_id,quarter,state,age,sex,citizen,region,weight

Quarters are written ``YYYY.Q``, sex as M/F, citizen as 0/1, region as
NORTH/CENTRE/SOUTH. The weight column may be blank (read as 1.0) but must be
positive when present. Malformed rows are rejected, not fatal: parsing
returns a report of (line_number, reason) so dirty survey files stay
auditable. Rows whose first-wave age falls outside 15-34 are dropped from
the analysis dataset and counted separately (they are valid, just out of
scope).

Wave files are linked into 3-month pairs: one pair per person per adjacent
quarter couple, demographics and weight taken from the first wave of the
pair. Person identifiers are assumed stable across the two rotation spells;
real survey extracts may not guarantee this, in which case the second spell
simply contributes pairs under a fresh identifier.
"""

import csv
import dataclasses
from collections import defaultdict

import numpy as np

from .errors import PanelFormatError
from .states import (
    AGE_MAX,
    AGE_MIN,
    N_STATES,
    STATE_ORDER,
    Demographics,
    LaborState,
    MacroRegion,
    QuarterId,
    Sex,
    quarter_successor,
)
from .stochastic import ensure_row_stochastic

PAIR_HEADER = (
    "person_id", "quarter_from", "quarter_to", "state_from", "state_to",
    "age", "sex", "citizen", "region", "weight",
)
WAVE_HEADER = ("person_id", "quarter", "state", "age", "sex", "citizen", "region", "weight")

# Interview offsets of the 2-in/2-out/2-in rotation, relative to entry.
ROTATION_OFFSETS = (0, 1, 4, 5)


@dataclasses.dataclass(frozen=True)
class WaveRow:
    """One interview: a person's state observed in one quarter."""

    person_id: str
    quarter: QuarterId
    state: LaborState
    demographics: Demographics
    weight: float = 1.0


@dataclasses.dataclass(frozen=True)
class ObservationPair:
    """A linked 3-month observation: states in two adjacent quarters."""

    person_id: str
    quarter_from: QuarterId
    quarter_to: QuarterId
    state_from: LaborState
    state_to: LaborState
    demographics: Demographics
    weight: float = 1.0

    def __post_init__(self):
        if self.quarter_to != quarter_successor(self.quarter_from):
            raise ValueError(
                f"pair quarters must be adjacent, got {self.quarter_from} -> {self.quarter_to}"
            )
        if not self.weight > 0:
            raise ValueError(f"pair weight must be positive, got {self.weight!r}")


@dataclasses.dataclass(frozen=True)
class PanelDataset:
    """Immutable collection of observation pairs plus provenance."""

    pairs: tuple[ObservationPair, ...]
    provenance: str
    quarter_range: tuple[QuarterId, QuarterId] | None

    @classmethod
    def from_pairs(cls, pairs, provenance: str) -> "PanelDataset":
        pairs = tuple(pairs)
        if pairs:
            lo = min(p.quarter_from for p in pairs)
            hi = max(p.quarter_to for p in pairs)
            qrange = (lo, hi)
        else:
            qrange = None
        return cls(pairs=pairs, provenance=provenance, quarter_range=qrange)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclasses.dataclass(frozen=True)
class ParseReport:
    """Audit trail of a parse: rejected lines and out-of-scope counts."""

    rejections: tuple[tuple[int, str], ...]
    n_rows: int
    n_pairs: int
    n_age_filtered: int

    def to_csv(self) -> str:
        import io

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["line_number", "reason"])
        for line, reason in self.rejections:
            w.writerow([line, reason])
        return buf.getvalue()


@dataclasses.dataclass(frozen=True)
class LinkResult:
    """Pairs produced by wave linkage plus the waves dropped on the way."""

    pairs: tuple[ObservationPair, ...]
    rejected: tuple[tuple[WaveRow, str], ...]


def _parse_demographics(age_text, sex_text, citizen_text, region_text) -> Demographics:
    try:
        age = int(str(age_text).strip())
    except ValueError:
        raise ValueError(f"invalid age {age_text!r}") from None
    if age < 0:
        raise ValueError(f"invalid age {age!r} (negative)")
    sex = Sex.parse(sex_text)
    cit_raw = str(citizen_text).strip()
    if cit_raw not in ("0", "1"):
        raise ValueError(f"invalid citizen flag {citizen_text!r} (expected 0 or 1)")
    region = MacroRegion.parse(region_text)
    return Demographics(
        age_at_first_wave=age,
        sex=sex,
        italian_citizen=cit_raw == "1",
        macro_region=region,
    )


def _parse_weight(text) -> float:
    raw = str(text).strip()
    if raw == "":
        return 1.0
    try:
        w = float(raw)
    except ValueError:
        raise ValueError(f"invalid weight {text!r}") from None
    if not np.isfinite(w) or w <= 0:
        raise ValueError(f"nonpositive weight {raw}")
    return w


def _detect_format(header: list[str]) -> str:
    cleaned = tuple(h.strip().lstrip("﻿") for h in header)
    if cleaned == PAIR_HEADER:
        return "pair_rows"
    if cleaned == WAVE_HEADER:
        return "wave_rows"
    raise PanelFormatError(
        f"unrecognized header {','.join(header)!r}; expected the pair_rows or wave_rows schema"
    )


def parse_panel_file(path, format: str = "auto") -> tuple[PanelDataset, ParseReport]:
    """Parse a pair_rows or wave_rows CSV into a validated PanelDataset.

    Parameters
    ----------
    path : str or Path
        CSV file to read.
    format : {"auto", "pair_rows", "wave_rows"}
        Expected layout; "auto" detects it from the header line.

    Returns
    -------
    (PanelDataset, ParseReport)
        The admitted pairs and the audit report. Malformed rows are listed
        in the report with their line numbers; an unreadable file or an
        unknown header raises PanelFormatError.
    """
    if format not in ("auto", "pair_rows", "wave_rows"):
        raise ValueError(f"unknown format {format!r}")
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise PanelFormatError(f"cannot read {path}: {exc}") from exc

    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise PanelFormatError(f"{path} is empty") from None
        detected = _detect_format(header)
        if format != "auto" and detected != format:
            raise PanelFormatError(f"{path} has a {detected} header but {format} was requested")
        if detected == "pair_rows":
            return _parse_pair_rows(reader, str(path))
        return _parse_wave_rows(reader, str(path))


def _parse_pair_rows(reader, src: str) -> tuple[PanelDataset, ParseReport]:
    pairs = []
    rejections = []
    n_rows = 0
    n_age_filtered = 0
    for row in reader:
        if not row:
            continue
        n_rows += 1
        line = reader.line_num
        if len(row) != len(PAIR_HEADER):
            rejections.append((line, f"wrong field count (expected {len(PAIR_HEADER)}, got {len(row)})"))
            continue
        pid, q_from, q_to, s_from, s_to, age, sex, cit, region, weight = row
        try:
            quarter_from = QuarterId.parse(q_from)
            quarter_to = QuarterId.parse(q_to)
            if quarter_to != quarter_successor(quarter_from):
                raise ValueError(f"quarters not adjacent ({quarter_from} -> {quarter_to})")
            pair = ObservationPair(
                person_id=pid.strip(),
                quarter_from=quarter_from,
                quarter_to=quarter_to,
                state_from=LaborState.parse(s_from),
                state_to=LaborState.parse(s_to),
                demographics=_parse_demographics(age, sex, cit, region),
                weight=_parse_weight(weight),
            )
        except ValueError as exc:
            rejections.append((line, str(exc)))
            continue
        if not AGE_MIN <= pair.demographics.age_at_first_wave <= AGE_MAX:
            n_age_filtered += 1
            continue
        pairs.append(pair)
    dataset = PanelDataset.from_pairs(pairs, provenance=f"pair_rows:{src}")
    report = ParseReport(
        rejections=tuple(rejections),
        n_rows=n_rows,
        n_pairs=len(pairs),
        n_age_filtered=n_age_filtered,
    )
    return dataset, report


def _parse_wave_rows(reader, src: str) -> tuple[PanelDataset, ParseReport]:
    waves: list[tuple[int, WaveRow]] = []
    rejections = []
    n_rows = 0
    for row in reader:
        if not row:
            continue
        n_rows += 1
        line = reader.line_num
        if len(row) != len(WAVE_HEADER):
            rejections.append((line, f"wrong field count (expected {len(WAVE_HEADER)}, got {len(row)})"))
            continue
        pid, quarter, state, age, sex, cit, region, weight = row
        try:
            wave = WaveRow(
                person_id=pid.strip(),
                quarter=QuarterId.parse(quarter),
                state=LaborState.parse(state),
                demographics=_parse_demographics(age, sex, cit, region),
                weight=_parse_weight(weight),
            )
        except ValueError as exc:
            rejections.append((line, str(exc)))
            continue
        waves.append((line, wave))

    clean, dup_rejected = _screen_duplicates(waves)
    rejections.extend((line, reason) for line, _, reason in dup_rejected)
    rejections.sort(key=lambda item: item[0])

    linked = link_waves([w for _, w in clean])
    pairs = []
    n_age_filtered = 0
    for pair in linked.pairs:
        if AGE_MIN <= pair.demographics.age_at_first_wave <= AGE_MAX:
            pairs.append(pair)
        else:
            n_age_filtered += 1
    dataset = PanelDataset.from_pairs(pairs, provenance=f"wave_rows:{src}")
    report = ParseReport(
        rejections=tuple(rejections),
        n_rows=n_rows,
        n_pairs=len(pairs),
        n_age_filtered=n_age_filtered,
    )
    return dataset, report


def _screen_duplicates(waves):
    """Split numbered waves into clean rows and duplicate-key rejects.

    A repeated (person, quarter) key with conflicting states invalidates
    every row carrying the key; repeats that agree keep the first row only.
    """
    by_key: dict[tuple[str, QuarterId], list[tuple[int, WaveRow]]] = defaultdict(list)
    for line, wave in waves:
        by_key[(wave.person_id, wave.quarter)].append((line, wave))

    clean = []
    rejected = []
    for (pid, quarter), group in by_key.items():
        if len(group) == 1:
            clean.append(group[0])
            continue
        states = {w.state for _, w in group}
        if len(states) > 1:
            for line, wave in group:
                rejected.append((line, wave, f"conflicting duplicate states for person {pid!r} at {quarter}"))
        else:
            clean.append(group[0])
            first_line = group[0][0]
            for line, wave in group[1:]:
                rejected.append((line, wave, f"duplicate of line {first_line} (person {pid!r} at {quarter})"))
    clean.sort(key=lambda item: item[0])
    return clean, rejected


def link_waves(rows) -> LinkResult:
    """Link per-wave observations into 3-month pairs.

    Emits one pair for every (person, q, q+1) couple present in ``rows``;
    non-adjacent observations produce no pair. Demographics and weight come
    from the first wave of each pair. Duplicate (person, quarter) keys with
    conflicting states drop every involved row; agreeing duplicates keep the
    first. Pairs are sorted by (person_id, quarter_from).
    """
    numbered = list(enumerate(rows))
    clean, dup_rejected = _screen_duplicates(numbered)
    rejected = tuple((wave, reason) for _, wave, reason in dup_rejected)

    by_person: dict[str, list[WaveRow]] = defaultdict(list)
    for _, wave in clean:
        by_person[wave.person_id].append(wave)

    pairs = []
    for pid in sorted(by_person):
        person_waves = sorted(by_person[pid], key=lambda w: w.quarter)
        by_quarter = {w.quarter: w for w in person_waves}
        for wave in person_waves:
            nxt = by_quarter.get(quarter_successor(wave.quarter))
            if nxt is None:
                continue
            pairs.append(
                ObservationPair(
                    person_id=pid,
                    quarter_from=wave.quarter,
                    quarter_to=nxt.quarter,
                    state_from=wave.state,
                    state_to=nxt.state,
                    demographics=wave.demographics,
                    weight=wave.weight,
                )
            )
    pairs.sort(key=lambda p: (p.person_id, p.quarter_from))
    return LinkResult(pairs=tuple(pairs), rejected=rejected)


def _sample_rows(cum_rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    # First index whose cumulative mass reaches u; clip guards the u ~ 1.0
    # edge against row sums a few ulp below one.
    idx = (cum_rows < u[:, None]).sum(axis=1)
    return np.minimum(idx, cum_rows.shape[1] - 1)


def generate_synthetic_panel(
    truth,
    initial_shares,
    n_individuals: int,
    start_quarter: QuarterId,
    n_quarters: int,
    seed: int,
) -> PanelDataset:
    """Simulate a rotating panel whose transitions follow a known chain.

    Each individual enters in a quarter drawn uniformly from the window
    (leaving room for at least one interview pair), is interviewed in the
    entry quarter and the next, skips two quarters, and returns for two
    more, the 2-in/2-out/2-in rotation. The entry state is drawn from
    ``initial_shares``; each subsequent quarter applies one step of
    ``truth``. Interviews falling past the window are not observed.

    Parameters
    ----------
    truth : TransitionMatrix or (7, 7) array
        Row-stochastic chain driving the state dynamics.
    initial_shares : length-7 array
        Distribution of entry states; must sum to 1 within 1e-9.
    n_individuals : int
        Number of simulated respondents (>= 1).
    start_quarter : QuarterId
        First quarter of the observation window.
    n_quarters : int
        Window length in quarters (>= 1).
    seed : int
        Output is a deterministic function of the arguments and this seed.

    Returns
    -------
    PanelDataset
        Linked pairs, at most two per individual, sorted by person then quarter.
    """
    entries = getattr(truth, "entries", truth)
    P = ensure_row_stochastic(entries)
    if P.shape[0] != N_STATES:
        raise ValueError(f"truth matrix must be {N_STATES}x{N_STATES}, got {P.shape}")
    shares = np.asarray(initial_shares, dtype=float)
    if shares.shape != (N_STATES,):
        raise ValueError(f"initial_shares must have length {N_STATES}")
    if shares.min() < 0 or abs(float(shares.sum()) - 1.0) > 1e-9:
        raise ValueError("initial_shares must be nonnegative and sum to 1 within 1e-9")
    if n_individuals < 1:
        raise ValueError("n_individuals must be >= 1")
    if n_quarters < 1:
        raise ValueError("n_quarters must be >= 1")

    rng = np.random.default_rng(seed)
    n = n_individuals

    # Entry offsets leave room for the first pair whenever the window allows.
    entry = rng.integers(0, max(n_quarters - 1, 1), size=n)
    ages = rng.integers(AGE_MIN, AGE_MAX + 1, size=n)
    sexes = rng.integers(0, 2, size=n)
    citizens = rng.random(n) < 0.9
    regions = rng.choice(3, size=n, p=(0.45, 0.20, 0.35))

    n_steps = max(ROTATION_OFFSETS)
    states = np.empty((n, n_steps + 1), dtype=np.int64)
    states[:, 0] = _sample_rows(np.cumsum(shares)[None, :], rng.random(n))
    cum = np.cumsum(P, axis=1)
    for t in range(1, n_steps + 1):
        states[:, t] = _sample_rows(cum[states[:, t - 1]], rng.random(n))

    quarters = [start_quarter.plus(k) for k in range(n_quarters)]
    region_values = (MacroRegion.NORTH, MacroRegion.CENTRE, MacroRegion.SOUTH)
    sex_values = (Sex.M, Sex.F)
    width = max(len(str(n - 1)), 6)

    pairs = []
    for k in range(n):
        demo = Demographics(
            age_at_first_wave=int(ages[k]),
            sex=sex_values[sexes[k]],
            italian_citizen=bool(citizens[k]),
            macro_region=region_values[regions[k]],
        )
        pid = f"P{k:0{width}d}"
        e = int(entry[k])
        for lo in (0, 4):
            if e + lo + 1 >= n_quarters:
                break
            pairs.append(
                ObservationPair(
                    person_id=pid,
                    quarter_from=quarters[e + lo],
                    quarter_to=quarters[e + lo + 1],
                    state_from=STATE_ORDER[states[k, lo]],
                    state_to=STATE_ORDER[states[k, lo + 1]],
                    demographics=demo,
                    weight=1.0,
                )
            )
    provenance = (
        f"synthetic panel: seed={seed}, individuals={n_individuals}, "
        f"start={start_quarter}, quarters={n_quarters}"
    )
    return PanelDataset.from_pairs(pairs, provenance=provenance)


def write_pairs_csv(dataset: PanelDataset, path) -> None:
    """Write a dataset in the pair_rows layout. Output is byte-deterministic."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PAIR_HEADER)
        for p in dataset.pairs:
            d = p.demographics
            w.writerow(
                [
                    p.person_id,
                    str(p.quarter_from),
                    str(p.quarter_to),
                    p.state_from.name,
                    p.state_to.name,
                    d.age_at_first_wave,
                    d.sex.name,
                    1 if d.italian_citizen else 0,
                    d.macro_region.name,
                    repr(float(p.weight)),
                ]
            )
