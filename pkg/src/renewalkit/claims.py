"""From raw policy/claim records to waiting-time distribution functions.

The pipeline is deliberately dumb: clean the records, count claim
occurrences by (renewal age, claim age), normalise the rows.  Ages are
integer completed years, age 18 is grid index 0, and entry ages at or past
the pooling cap (default 60) are compiled together.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grids import TimeGrid, TwoTimeMatrix

__all__ = [
    "BASE_AGE",
    "CleaningConfig",
    "DurationHistogram",
    "IngestReport",
    "NoClaimRow",
    "NoClaimTable",
    "OccurrenceTable",
    "PolicyRecord",
    "TRANSITIONS",
    "build_duration_histogram",
    "build_occurrence_table",
    "histogram_to_df",
    "ingest",
    "no_claim_table",
    "occurrence_to_nh_df",
]

#: Grid index 0 corresponds to this age.
BASE_AGE = 18

TRANSITIONS = ("entry-to-first", "first-to-second", "second-to-third", "merged")


@dataclass(frozen=True)
class CleaningConfig:
    """Knobs for the record cleaner.

    ``zero_duration`` decides what to do with a claim dated at the same
    integer age as its renewal: "bucket1" keeps it and books it at duration
    one year, "discard" drops it.
    """

    impute_entry_age: int = 24
    cap_age: int = 60
    zero_duration: str = "bucket1"

    def __post_init__(self) -> None:
        if self.impute_entry_age < BASE_AGE:
            raise ValueError(f"impute_entry_age must be >= {BASE_AGE}")
        if self.cap_age <= BASE_AGE:
            raise ValueError(f"cap_age must be > {BASE_AGE}")
        if self.zero_duration not in ("bucket1", "discard"):
            raise ValueError("zero_duration must be 'bucket1' or 'discard'")


@dataclass(frozen=True)
class PolicyRecord:
    """One insured person after cleaning: entry age plus retained claim ages."""

    policy_id: str
    entry_age: int
    claim_ages: tuple[int, ...] = ()


@dataclass
class IngestReport:
    policies_read: int = 0
    policies_rejected: int = 0
    imputed_entries: int = 0
    claims_read: int = 0
    claims_retained: int = 0
    claims_discarded: int = 0

    def as_text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in vars(self).items())


def ingest(
    policies_file: str | Path,
    claims_file: str | Path,
    cleaning: CleaningConfig = CleaningConfig(),
) -> tuple[list[PolicyRecord], IngestReport]:
    """Read, validate and clean the two CSVs.

    Cleaning rules: a missing entry age is imputed to the configured
    default; an entry age below 18 rejects the whole policy (counted, not
    fatal); claims dated before the entry age or before the previous
    retained claim are discarded; same-age claims follow ``zero_duration``.
    Malformed rows and claims pointing at unknown policies raise with the
    file and line number.
    """
    report = IngestReport()
    entry_by_id: dict[str, int] = {}
    order: list[str] = []
    rejected: set[str] = set()

    for lineno, row in _csv_rows(policies_file, ("policy_id", "entry_age")):
        pid, age_text = row
        if pid in entry_by_id or pid in rejected:
            raise ValueError(f"{policies_file}:{lineno}: duplicate policy_id {pid!r}")
        report.policies_read += 1
        if age_text == "":
            entry_age = cleaning.impute_entry_age
            report.imputed_entries += 1
        else:
            entry_age = _parse_age(age_text, policies_file, lineno)
            if entry_age < BASE_AGE:
                report.policies_rejected += 1
                rejected.add(pid)
                continue
        entry_by_id[pid] = entry_age
        order.append(pid)

    claims_by_id: dict[str, list[int]] = {pid: [] for pid in order}
    for lineno, row in _csv_rows(claims_file, ("policy_id", "claim_age")):
        pid, age_text = row
        report.claims_read += 1
        if pid in rejected:
            report.claims_discarded += 1
            continue
        if pid not in claims_by_id:
            raise ValueError(f"{claims_file}:{lineno}: claim references unknown policy_id {pid!r}")
        claims_by_id[pid].append(_parse_age(age_text, claims_file, lineno))

    records = []
    for pid in order:
        entry = entry_by_id[pid]
        retained: list[int] = []
        anchor = entry
        for c in sorted(claims_by_id[pid]):
            if c < anchor or (c == anchor and cleaning.zero_duration == "discard"):
                report.claims_discarded += 1
                continue
            retained.append(c)
            anchor = c
        report.claims_retained += len(retained)
        records.append(PolicyRecord(pid, entry, tuple(retained)))
    return records, report


def _csv_rows(path: str | Path, header: tuple[str, str]):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise ValueError(f"{path}:1: empty file, expected header {','.join(header)}") from None
        if tuple(x.strip() for x in first) != header:
            raise ValueError(f"{path}:1: expected header {','.join(header)}, got {first}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            yield lineno, (row[0].strip(), row[1].strip())


def _parse_age(text: str, path: str | Path, lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"{path}:{lineno}: malformed age {text!r}") from None


@dataclass(frozen=True)
class DurationHistogram:
    """Counts of renewals by exact duration in years (index = duration)."""

    counts: np.ndarray = field(repr=False)
    source: str = "merged"

    def __post_init__(self) -> None:
        c = np.asarray(self.counts, dtype=np.int64)
        if c.ndim != 1 or len(c) < 1 or c[0] != 0:
            raise ValueError("counts must be a 1-d array with counts[0] = 0")
        if np.any(c < 0):
            raise ValueError("counts must be nonnegative")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)

    @property
    def horizon(self) -> int:
        return len(self.counts) - 1

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def _durations(record: PolicyRecord) -> list[tuple[int, int]]:
    """(transition index, duration) pairs; same-age claims count as one year."""
    out = []
    anchor = record.entry_age
    for k, c in enumerate(record.claim_ages):
        out.append((k, max(c - anchor, 1)))
        anchor = c
    return out


def build_duration_histogram(
    records: list[PolicyRecord], transition: str = "merged"
) -> DurationHistogram:
    """Histogram of waiting times for one transition, or all pooled."""
    if transition not in TRANSITIONS:
        raise ValueError(f"unknown transition {transition!r}; expected one of {TRANSITIONS}")
    wanted = TRANSITIONS.index(transition) if transition != "merged" else None
    durations = [
        d
        for rec in records
        for k, d in _durations(rec)
        if wanted is None or k == wanted
    ]
    horizon = max(durations, default=0)
    counts = np.zeros(horizon + 1, dtype=np.int64)
    for d in durations:
        counts[d] += 1
    return DurationHistogram(counts, transition)


def histogram_to_df(hist: DurationHistogram) -> np.ndarray:
    """Cumulative counts scaled by the grand total: F(i) = v(i) / v(T).

    The result is a proper d.f. (F(T) = 1): it conditions on a renewal
    happening within the observed horizon.
    """
    total = hist.total
    if total == 0:
        raise ValueError("cannot build a d.f. from an all-zero histogram")
    return np.cumsum(hist.counts) / total


@dataclass(frozen=True)
class OccurrenceTable:
    """Claim counts n(s, t) by renewal age s and claim age t, s < t.

    Index 0 is age ``BASE_AGE``; ages at or past ``cap_age`` are pooled into
    the last row/column.  Claims whose renewal age already sits in the pooled
    band cannot be placed (they would need n(cap, cap)) and are counted in
    ``dropped_beyond_cap`` instead.
    """

    counts: np.ndarray = field(repr=False)
    cap_age: int = 60
    dropped_beyond_cap: int = 0

    def __post_init__(self) -> None:
        c = np.asarray(self.counts, dtype=np.int64)
        n = self.cap_age - BASE_AGE + 1
        if c.shape != (n, n):
            raise ValueError(f"counts shape {c.shape} does not match age range ({n}, {n})")
        if np.any(c < 0):
            raise ValueError("counts must be nonnegative")
        if np.any(np.tril(c) != 0):
            s = np.argwhere(np.tril(c) != 0)[0]
            raise ValueError(f"counts must vanish for s >= t; n({s[0]},{s[1]}) != 0")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)

    @property
    def n_ages(self) -> int:
        return self.cap_age - BASE_AGE + 1


def build_occurrence_table(records: list[PolicyRecord], cap_age: int = 60) -> OccurrenceTable:
    """One count per retained claim at (renewal age, claim age), pooled at the cap."""
    n = cap_age - BASE_AGE + 1
    counts = np.zeros((n, n), dtype=np.int64)
    dropped = 0
    for rec in records:
        anchor = rec.entry_age
        for c in rec.claim_ages:
            s_age, t_age = anchor, max(c, anchor + 1)
            anchor = c
            s = min(s_age, cap_age) - BASE_AGE
            t = min(t_age, cap_age) - BASE_AGE
            if s < t:
                counts[s, t] += 1
            else:
                dropped += 1
    return OccurrenceTable(counts, cap_age, dropped)


def occurrence_to_nh_df(
    table: OccurrenceTable, row_mass: np.ndarray | None = None
) -> tuple[TwoTimeMatrix, list[int]]:
    """Row-normalise the occurrence counts into a waiting-time d.f. matrix.

    Row s becomes F(s, t) = cumulative counts / row total, a proper d.f.
    conditioned on a claim happening within the horizon; passing ``row_mass``
    rescales each row to that total mass instead (defective rows).  Rows with
    no claims at all stay identically zero and are returned as warnings.
    """
    n = table.n_ages
    if row_mass is not None:
        row_mass = np.asarray(row_mass, dtype=np.float64)
        if row_mass.shape != (n,) or np.any(row_mass < 0) or np.any(row_mass > 1):
            raise ValueError("row_mass must give one value in [0, 1] per age row")
    values = np.zeros((n, n))
    zero_rows = []
    for s in range(n - 1):
        row_total = table.counts[s, s + 1 :].sum()
        if row_total == 0:
            zero_rows.append(s)
            continue
        cum = np.cumsum(table.counts[s, s + 1 :]) / row_total
        if row_mass is not None:
            cum = cum * row_mass[s]
        values[s, s + 1 :] = cum
    zero_rows.append(n - 1)  # the pooled cap row never has a later claim age
    grid = TimeGrid(origin=float(BASE_AGE), step_h=1.0, n_points=n)
    return TwoTimeMatrix(grid, values, "distribution"), zero_rows


@dataclass(frozen=True)
class NoClaimRow:
    label: str
    total: int
    no_claim: int

    @property
    def prob_no_claim(self) -> float:
        return self.no_claim / self.total

    @property
    def prob_claim(self) -> float:
        return 1.0 - self.no_claim / self.total


@dataclass(frozen=True)
class NoClaimTable:
    rows: tuple[NoClaimRow, ...]


def no_claim_table(records: list[PolicyRecord], cap_age: int = 60) -> NoClaimTable:
    """Per-entry-age counts of policies with no retained claim.

    One row per observed entry age below the cap, a pooled row for entry
    ages at or past it, and a grand-total row.
    """
    totals: dict[int, int] = {}
    quiet: dict[int, int] = {}
    pooled_total = pooled_quiet = 0
    for rec in records:
        key = rec.entry_age
        if key >= cap_age:
            pooled_total += 1
            pooled_quiet += not rec.claim_ages
        else:
            totals[key] = totals.get(key, 0) + 1
            quiet[key] = quiet.get(key, 0) + (not rec.claim_ages)
    rows = [NoClaimRow(str(age), totals[age], quiet[age]) for age in sorted(totals)]
    if pooled_total:
        rows.append(NoClaimRow(f">={cap_age}", pooled_total, pooled_quiet))
    if rows:
        rows.append(
            NoClaimRow(
                "total",
                sum(r.total for r in rows),
                sum(r.no_claim for r in rows),
            )
        )
    return NoClaimTable(tuple(rows))
