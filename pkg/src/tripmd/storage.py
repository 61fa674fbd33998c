"""Delimited-text readers and writers for every pipeline artifact.

Floats are written with ``repr`` so values round-trip exactly and repeated
runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .behavior import BEHAVIOR_ORDER, BehaviorScore, ClusterBehaviorRates
from .errors import ValidationError
from .motifs import Motif, Pattern
from .ranking import RankedMotif
from .som import Assignment, SomGrid
from .trips import Behavior, SubseqRef, TripRecording, slice_trip, trips_by_id
from .vsax import Breakpoints, VsaxSequence

MANIFEST_NAME = "manifest.json"
MOTIFS_NAME = "motifs.csv"
BREAKPOINTS_NAME = "breakpoints.csv"
RANKED_NAME = "ranked_motifs.csv"
ANCHORS_NAME = "anchors.csv"
UNITS_NAME = "units.csv"
U_MATRIX_NAME = "u_matrix.csv"
WINNER_MATRIX_NAME = "winner_matrix.csv"
ASSIGNMENTS_NAME = "assignments.csv"
RATES_NAME = "rates.csv"
SCORES_NAME = "scores.csv"
BOOTSTRAP_NAME = "bootstrap.csv"

_MOTIF_HEADER = (
    "pattern_size",
    "pattern",
    "center_trip",
    "center_start",
    "center_end",
    "mean_member_distance",
    "members",
)


def _fmt(value: float) -> str:
    return repr(float(value))


def pattern_to_str(pattern: Pattern) -> str:
    """Letters joined by '-', channel symbols within a letter by ',' (1-based)."""
    return "-".join(",".join(str(s + 1) for s in letter) for letter in pattern)


def pattern_from_str(text: str) -> Pattern:
    try:
        pattern = tuple(
            tuple(int(s) - 1 for s in letter.split(",")) for letter in text.split("-")
        )
    except ValueError:
        raise ValidationError(f"bad pattern string {text!r}") from None
    if not pattern or any(s < 0 for letter in pattern for s in letter):
        raise ValidationError(f"bad pattern string {text!r}")
    return pattern


def _check_trip_id(trip_id: str) -> str:
    if any(ch in trip_id for ch in ":;,"):
        raise ValidationError(f"trip id {trip_id!r} contains a reserved delimiter")
    return trip_id


def _refs_to_str(refs: Sequence[SubseqRef]) -> str:
    return ";".join(f"{_check_trip_id(r.trip_id)}:{r.start}:{r.end}" for r in refs)


def _refs_from_str(text: str, where: str) -> tuple[SubseqRef, ...]:
    if not text:
        return ()
    refs = []
    for part in text.split(";"):
        fields = part.split(":")
        if len(fields) != 3:
            raise ValidationError(f"{where}: bad span {part!r}")
        try:
            refs.append(SubseqRef(fields[0], int(fields[1]), int(fields[2])))
        except (ValueError, ValidationError):
            raise ValidationError(f"{where}: bad span {part!r}") from None
    return tuple(refs)


def write_motifs(path: str | Path, motifs: Sequence[Motif]) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_MOTIF_HEADER)
        for m in motifs:
            writer.writerow(
                (
                    m.pattern_size,
                    pattern_to_str(m.pattern),
                    _check_trip_id(m.center.trip_id),
                    m.center.start,
                    m.center.end,
                    _fmt(m.mean_member_distance),
                    _refs_to_str(m.members),
                )
            )


def read_motifs(path: str | Path, trips: Sequence[TripRecording]) -> list[Motif]:
    """Load a motif table, resolving center values from the given trips."""
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"motif file not found: {path}")
    by_id = trips_by_id(trips)
    motifs = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != _MOTIF_HEADER:
            raise ValidationError(f"{path}: expected header {','.join(_MOTIF_HEADER)}")
        for line_no, row in enumerate(reader, start=2):
            where = f"{path} line {line_no}"
            if len(row) != len(_MOTIF_HEADER):
                raise ValidationError(f"{where}: expected {len(_MOTIF_HEADER)} cells")
            try:
                size = int(row[0])
                center = SubseqRef(row[2], int(row[3]), int(row[4]))
                mean = float(row[5])
            except (ValueError, ValidationError):
                raise ValidationError(f"{where}: malformed cell") from None
            pattern = pattern_from_str(row[1])
            if len(pattern) != size:
                raise ValidationError(f"{where}: pattern size {size} vs {len(pattern)} letters")
            if center.trip_id not in by_id:
                raise ValidationError(f"{where}: unknown trip {center.trip_id!r}")
            motifs.append(
                Motif(
                    pattern=pattern,
                    center=center,
                    members=_refs_from_str(row[6], where),
                    mean_member_distance=mean,
                    center_values=slice_trip(by_id[center.trip_id], center),
                )
            )
    return motifs


def write_breakpoints(path: str | Path, breakpoints: Breakpoints, channels: Sequence[str]) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("channel",) + tuple(f"edge_{i + 1}" for i in range(6)))
        for name, row in zip(channels, breakpoints.edges):
            writer.writerow((name,) + tuple(_fmt(v) for v in row))


def read_breakpoints(path: str | Path) -> tuple[tuple[str, ...], Breakpoints]:
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"breakpoints file not found: {path}")
    names = []
    rows = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        next(reader, None)
        for line_no, row in enumerate(reader, start=2):
            if len(row) != 7:
                raise ValidationError(f"{path} line {line_no}: expected 7 cells")
            try:
                names.append(row[0])
                rows.append([float(v) for v in row[1:]])
            except ValueError:
                raise ValidationError(f"{path} line {line_no}: malformed cell") from None
    if not rows:
        raise ValidationError(f"{path}: no breakpoint rows")
    return tuple(names), Breakpoints(np.asarray(rows))


def write_ranked(path: str | Path, ranked: Sequence[RankedMotif]) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("rank", "mdl_score") + _MOTIF_HEADER)
        for i, entry in enumerate(ranked):
            m = entry.motif
            writer.writerow(
                (
                    i,
                    _fmt(entry.mdl_score),
                    m.pattern_size,
                    pattern_to_str(m.pattern),
                    _check_trip_id(m.center.trip_id),
                    m.center.start,
                    m.center.end,
                    _fmt(m.mean_member_distance),
                    _refs_to_str(m.members),
                )
            )


def write_vsax_sequences(
    directory: str | Path, sequences: Sequence[VsaxSequence], channels: Sequence[str]
) -> None:
    """One letters file per trip: start, end, and a symbol column per channel."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for seq in sequences:
        with (directory / f"{seq.trip_id}.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(("start", "end") + tuple(f"symbol_{c}" for c in channels))
            for letter in seq.letters:
                writer.writerow(
                    (letter.span.start, letter.span.end) + tuple(s + 1 for s in letter.symbols)
                )


def write_units(path: str | Path, grid: SomGrid, channels: Sequence[str]) -> None:
    """Prototype series in long form: one row per (unit, step)."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("unit_index", "row", "col", "step") + tuple(channels))
        for u, unit in enumerate(grid.units):
            r, c = grid.coords(u)
            for step, sample in enumerate(unit):
                writer.writerow((u, r, c, step) + tuple(_fmt(v) for v in sample))


def write_matrix(path: str | Path, matrix: np.ndarray) -> None:
    """Grid-shaped table: one CSV row per grid row."""
    matrix = np.asarray(matrix)
    as_float = matrix.dtype.kind == "f"
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        for row in matrix:
            writer.writerow(tuple(_fmt(v) for v in row) if as_float else tuple(int(v) for v in row))


def write_assignments(path: str | Path, motifs: Sequence[Motif], assignment: Assignment) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("pattern", "center_trip", "center_start", "center_end", "unit_index"))
        for m, unit in zip(motifs, assignment.unit_indices):
            writer.writerow(
                (
                    pattern_to_str(m.pattern),
                    _check_trip_id(m.center.trip_id),
                    m.center.start,
                    m.center.end,
                    unit,
                )
            )


def read_assignments(path: str | Path, motifs: Sequence[Motif]) -> Assignment:
    """Assignment aligned to ``motifs`` order, joined on pattern and center."""
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"assignments file not found: {path}")
    units: dict[tuple, int] = {}
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        next(reader, None)
        for line_no, row in enumerate(reader, start=2):
            if len(row) != 5:
                raise ValidationError(f"{path} line {line_no}: expected 5 cells")
            try:
                key = (pattern_from_str(row[0]), SubseqRef(row[1], int(row[2]), int(row[3])))
                units[key] = int(row[4])
            except (ValueError, ValidationError):
                raise ValidationError(f"{path} line {line_no}: malformed cell") from None
    indices = []
    for m in motifs:
        key = (m.pattern, m.center)
        if key not in units:
            raise ValidationError(
                f"{path}: no assignment for motif {pattern_to_str(m.pattern)!r} "
                f"centered at {m.center.trip_id}:{m.center.start}"
            )
        indices.append(units[key])
    return Assignment(unit_indices=tuple(indices))


def write_rates(path: str | Path, rates: ClusterBehaviorRates) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ("unit_index",)
            + tuple(b.value for b in BEHAVIOR_ORDER)
            + ("n_training_subsequences",)
        )
        for u in range(rates.n_units):
            writer.writerow(
                (u,)
                + tuple(_fmt(v) for v in rates.rates[u])
                + (_fmt(rates.totals[u]),)
            )


def write_scores(
    path: str | Path, scores: Sequence[BehaviorScore], trips: Sequence[TripRecording]
) -> None:
    by_id = trips_by_id(trips)
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ("trip_id", "route", "behavior")
            + tuple(b.value for b in BEHAVIOR_ORDER)
            + ("predicted",)
        )
        for score in scores:
            trip = by_id.get(score.trip_id)
            writer.writerow(
                (
                    score.trip_id,
                    trip.route.value if trip else "",
                    trip.behavior.value if trip and trip.behavior else "",
                )
                + tuple(_fmt(score.scores[b]) for b in BEHAVIOR_ORDER)
                + (score.predicted.value if score.predicted else "",)
            )


def write_bootstrap(
    path: str | Path, stats: Mapping[str, Mapping[Behavior, tuple[float, float]]]
) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("trip_id", "behavior", "mean", "std"))
        for trip_id in sorted(stats):
            for b in BEHAVIOR_ORDER:
                mean, std = stats[trip_id][b]
                writer.writerow((trip_id, b.value, _fmt(mean), _fmt(std)))


def write_manifest(path: str | Path, manifest: Mapping) -> None:
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def read_manifest(path: str | Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"manifest not found: {path}")
    try:
        manifest = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: {exc}") from None
    if not isinstance(manifest, dict):
        raise ValidationError(f"{path}: manifest must be a JSON object")
    return manifest
