"""Trip recordings: loading, block-mean resampling, and subsequence references."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import MetadataError, TripLoadError, ValidationError

METADATA_COLUMNS = ("trip_id", "driver_id", "route", "behavior")
TIMESTAMP_COLUMN = "timestamp"


class Route(str, enum.Enum):
    MOTORWAY = "motorway"
    SECONDARY = "secondary"
    OTHER = "other"


class Behavior(str, enum.Enum):
    NORMAL = "normal"
    AGGRESSIVE = "aggressive"
    DROWSY = "drowsy"


@dataclass(frozen=True)
class TripRecording:
    """One trip: an N x d matrix of channel samples plus ride metadata.

    Samples are stored as a read-only float array; rows are samples at a
    fixed rate, columns are channels in ``channel_names`` order.
    """

    trip_id: str
    driver_id: str
    route: Route
    behavior: Behavior | None
    sample_rate_hz: float
    channel_names: tuple[str, ...]
    samples: np.ndarray

    def __post_init__(self) -> None:
        samples = np.array(self.samples, dtype=float)
        if samples.ndim != 2:
            raise ValidationError(f"trip {self.trip_id}: samples must be 2-D, got {samples.ndim}-D")
        n, d = samples.shape
        if n < 1:
            raise ValidationError(f"trip {self.trip_id}: needs at least one sample")
        if d < 1 or d != len(self.channel_names):
            raise ValidationError(
                f"trip {self.trip_id}: {d} sample columns for {len(self.channel_names)} channel names"
            )
        if self.sample_rate_hz <= 0:
            raise ValidationError(f"trip {self.trip_id}: sample rate must be positive")
        if not np.isfinite(samples).all():
            raise ValidationError(f"trip {self.trip_id}: samples contain non-finite values")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "channel_names", tuple(self.channel_names))

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def n_channels(self) -> int:
        return self.samples.shape[1]


@dataclass(frozen=True, order=True)
class SubseqRef:
    """Half-open sample range [start, end) within one trip."""

    trip_id: str
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end <= self.start:
            raise ValidationError(f"bad subsequence range [{self.start}, {self.end})")

    @property
    def length(self) -> int:
        return self.end - self.start


def overlap(a: SubseqRef, b: SubseqRef) -> bool:
    """True when the two references intersect on the same trip."""
    return a.trip_id == b.trip_id and a.start < b.end and b.start < a.end


def slice_trip(trip: TripRecording, ref: SubseqRef) -> np.ndarray:
    """Value matrix for ``ref``, a view of shape (ref.length, d)."""
    if ref.trip_id != trip.trip_id:
        raise ValidationError(f"reference is for trip {ref.trip_id!r}, not {trip.trip_id!r}")
    if ref.end > trip.n_samples:
        raise ValidationError(
            f"trip {trip.trip_id}: range [{ref.start}, {ref.end}) exceeds {trip.n_samples} samples"
        )
    return trip.samples[ref.start : ref.end]


def downsample(trip: TripRecording, target_hz: float) -> TripRecording:
    """Reduce the sample rate by non-overlapping block means.

    The source rate must be an integer multiple of ``target_hz``; a trailing
    partial block is dropped. ``target_hz`` equal to the source rate returns
    an identical recording.
    """
    if target_hz <= 0:
        raise ValidationError("target rate must be positive")
    ratio = trip.sample_rate_hz / target_hz
    factor = int(round(ratio))
    if factor < 1 or abs(ratio - factor) > 1e-9:
        raise ValidationError(
            f"trip {trip.trip_id}: rate {trip.sample_rate_hz} Hz is not an integer multiple of {target_hz} Hz"
        )
    if factor == 1:
        return trip
    n_blocks = trip.n_samples // factor
    if n_blocks < 1:
        raise ValidationError(f"trip {trip.trip_id}: too short to resample to {target_hz} Hz")
    blocks = trip.samples[: n_blocks * factor].reshape(n_blocks, factor, trip.n_channels)
    return TripRecording(
        trip_id=trip.trip_id,
        driver_id=trip.driver_id,
        route=trip.route,
        behavior=trip.behavior,
        sample_rate_hz=target_hz,
        channel_names=trip.channel_names,
        samples=blocks.mean(axis=1),
    )


def load_metadata(metadata_path: str | Path) -> dict[str, tuple[str, Route, Behavior | None]]:
    """Read the trip metadata table: trip_id -> (driver_id, route, behavior)."""
    path = Path(metadata_path)
    if not path.is_file():
        raise MetadataError(f"metadata file not found: {path}")
    rows: dict[str, tuple[str, Route, Behavior | None]] = {}
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in METADATA_COLUMNS if c not in header]
        if missing:
            raise MetadataError(f"{path}: missing metadata columns {missing}")
        for line_no, row in enumerate(reader, start=2):
            trip_id = (row["trip_id"] or "").strip()
            if not trip_id:
                raise MetadataError(f"{path} line {line_no}: empty trip_id")
            if trip_id in rows:
                raise MetadataError(f"{path} line {line_no}: duplicate trip_id {trip_id!r}")
            try:
                route = Route((row["route"] or "").strip())
            except ValueError:
                raise MetadataError(
                    f"{path} line {line_no}: route must be one of {[r.value for r in Route]}"
                ) from None
            raw_behavior = (row["behavior"] or "").strip()
            behavior: Behavior | None
            if raw_behavior:
                try:
                    behavior = Behavior(raw_behavior)
                except ValueError:
                    raise MetadataError(
                        f"{path} line {line_no}: behavior must be empty or one of "
                        f"{[b.value for b in Behavior]}"
                    ) from None
            else:
                behavior = None
            rows[trip_id] = ((row["driver_id"] or "").strip(), route, behavior)
    return rows


def _read_trip_file(
    path: Path, channels: Sequence[str] | None
) -> tuple[tuple[str, ...], np.ndarray]:
    """Parse one trip CSV into (channel names, N x d values)."""
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise TripLoadError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if not header or header[0] != TIMESTAMP_COLUMN:
            raise TripLoadError(f"{path}: first column must be {TIMESTAMP_COLUMN!r}")
        available = header[1:]
        if len(set(available)) != len(available):
            raise TripLoadError(f"{path}: duplicate channel columns")
        if channels is None:
            wanted = list(available)
        else:
            missing = [c for c in channels if c not in available]
            if missing:
                raise TripLoadError(f"{path}: channel columns not found: {missing}")
            # Keep header order regardless of the order channels were requested in.
            wanted = [c for c in available if c in set(channels)]
        if not wanted:
            raise TripLoadError(f"{path}: no channel columns selected")
        take = [header.index(c) for c in wanted]

        values: list[list[float]] = []
        previous_ts: float | None = None
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise TripLoadError(
                    f"{path} line {line_no}: expected {len(header)} cells, got {len(row)}"
                )
            try:
                ts = float(row[0])
                parsed = [float(row[i]) for i in take]
            except ValueError as exc:
                raise TripLoadError(f"{path} line {line_no}: {exc}") from None
            if not np.isfinite(ts) or not all(np.isfinite(v) for v in parsed):
                raise TripLoadError(f"{path} line {line_no}: non-finite value")
            if previous_ts is not None and ts <= previous_ts:
                raise TripLoadError(f"{path} line {line_no}: timestamps must strictly increase")
            previous_ts = ts
            values.append(parsed)
        if not values:
            raise TripLoadError(f"{path}: no data rows")
    return tuple(wanted), np.asarray(values, dtype=float)


def load_trips(
    trips_dir: str | Path,
    metadata_path: str | Path,
    sample_rate_hz: float,
    channels: Sequence[str] | None = None,
) -> list[TripRecording]:
    """Load every trip CSV in a directory, joined with its metadata row.

    Trip files are ``<trip_id>.csv`` with a ``timestamp`` column followed by
    channel columns; when ``channels`` is given, only those columns are
    ingested (in header order). Trips are returned sorted by trip_id.
    """
    directory = Path(trips_dir)
    if not directory.is_dir():
        raise ValidationError(f"trip directory not found: {directory}")
    files = sorted(directory.glob("*.csv"))
    if not files:
        raise ValidationError(f"no trip files (*.csv) in {directory}")
    metadata = load_metadata(metadata_path)

    trips = []
    for path in files:
        trip_id = path.stem
        if trip_id not in metadata:
            raise MetadataError(f"trip {trip_id!r} has no metadata row in {metadata_path}")
        driver_id, route, behavior = metadata[trip_id]
        names, values = _read_trip_file(path, channels)
        trips.append(
            TripRecording(
                trip_id=trip_id,
                driver_id=driver_id,
                route=route,
                behavior=behavior,
                sample_rate_hz=sample_rate_hz,
                channel_names=names,
                samples=values,
            )
        )
    return trips


def trips_by_id(trips: Iterable[TripRecording]) -> dict[str, TripRecording]:
    return {t.trip_id: t for t in trips}
