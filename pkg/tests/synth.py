"""Synthetic corpora with planted, hand-verified structure.

The pulse trip is built so that the encoding behaves differently at the
two letter sizes used in the tests:

* at letter size 5 both pulses collapse to the same three-letter pattern
  (their plateau notch averages away), so the search recovers one motif
  whose occurrences cover each pulse entirely;
* at letter size 2 the notch lands window-aligned in pulse A but straddles
  two windows in pulse B, so the full-pulse patterns differ and only the
  short bump features repeat.

The percentile edge between the notch value (0.4) and the notch/plateau
straddle mean (0.45) is pinned by the sample count: with n=316 the upper
edge lands at 0.425 exactly.  Changing n, the feature values, or the
feature offsets will silently break that balance; verify before touching.
"""

from __future__ import annotations

import csv
import numpy as np

from tripmd.trips import Behavior, Route, TripRecording

SAMPLE_RATE_HZ = 5.0
CHANNELS = ("lat_acc", "lon_acc")
LON_SCALE = 0.4
NOISE_AMP = 0.005

_RISE = [0.1, 0.25, 0.4]
_FALL = [0.4, 0.3, 0.2, 0.1, 0.0]
# twin turn pulses: same run values, plateau two samples longer in B
PULSE_A = _RISE + [0.5, 0.5, 0.5, 0.4, 0.4, 0.5, 0.5] + _FALL
PULSE_B = _RISE + [0.5, 0.5, 0.5, 0.4, 0.4, 0.5, 0.5, 0.5, 0.5] + _FALL
# short twin bumps; the 0.51 keeps the pair distance strictly positive
BUMP_1 = [0.1, 0.1, 0.5, 0.51, 0.1, 0.1]
BUMP_2 = [0.1, 0.1, 0.5, 0.50, 0.1, 0.1]
# double-plateau island, one window per segment: encodes five letters
ISLAND = ([0.1, 0.25, 0.4, 0.5, 0.5] + [0.5] * 5 + [0.1] * 5 + [0.5] * 5
          + [0.4, 0.3, 0.2, 0.1, 0.0])

PULSE_TRIP_LEN = 316
PULSE_A_SPAN = (50, 50 + len(PULSE_A))
PULSE_B_SPAN = (125, 125 + len(PULSE_B))
BUMP_SPANS = ((80, 86), (190, 196))


def _noise_pair(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    return (rng.uniform(-NOISE_AMP, NOISE_AMP, n),
            rng.uniform(-NOISE_AMP, NOISE_AMP, n))


def _plant(lat: np.ndarray, lon: np.ndarray, offset: int, values,
           scale: float = 1.0) -> None:
    v = np.asarray(values, dtype=float) * scale
    lat[offset:offset + len(v)] = v
    lon[offset:offset + len(v)] = LON_SCALE * v


def make_pulse_trip(trip_id: str = "toy", driver_id: str = "D1",
                    behavior: Behavior | None = Behavior.NORMAL,
                    seed: int = 7, scale: float = 1.0) -> TripRecording:
    """Single trip with the twin pulses at 50/125 and twin bumps at 80/190."""
    lat, lon = _noise_pair(PULSE_TRIP_LEN, seed)
    _plant(lat, lon, PULSE_A_SPAN[0], PULSE_A, scale)
    _plant(lat, lon, PULSE_B_SPAN[0], PULSE_B, scale)
    _plant(lat, lon, BUMP_SPANS[0][0], BUMP_1, scale)
    _plant(lat, lon, BUMP_SPANS[1][0], BUMP_2, scale)
    return TripRecording(trip_id, driver_id, Route.MOTORWAY, behavior,
                         SAMPLE_RATE_HZ, CHANNELS,
                         np.column_stack([lat, lon]))


def make_noise_trip(trip_id: str = "flat", driver_id: str = "D1",
                    behavior: Behavior | None = Behavior.NORMAL,
                    n: int = 200, seed: int = 11) -> TripRecording:
    lat, lon = _noise_pair(n, seed)
    return TripRecording(trip_id, driver_id, Route.SECONDARY, behavior,
                         SAMPLE_RATE_HZ, CHANNELS,
                         np.column_stack([lat, lon]))


def make_fleet() -> list[TripRecording]:
    """Four-trip corpus for the behavior stages.

    Driver D1 supplies one labeled trip per behavior; driver D2 is the
    held-out test driver whose trip carries aggressive-style features.
    Aggressive trips repeat the pulse pair, the drowsy trip two copies of
    the double-plateau island (a distinct letter pattern), and the normal
    trip bumps only, so the per-unit rates differ between behaviors.  The
    pooled sample count keeps the upper breakpoint at 0.4, below every
    feature's plateau window mean; adding high-valued samples can push it
    into the plateaus and merge the letters.
    """
    trips = []

    trips.append(make_pulse_trip("d1_aggr", "D1", Behavior.AGGRESSIVE, seed=7))

    lat, lon = _noise_pair(PULSE_TRIP_LEN, 21)
    _plant(lat, lon, 50, ISLAND)
    _plant(lat, lon, 150, ISLAND)
    trips.append(TripRecording("d1_drowsy", "D1", Route.SECONDARY,
                               Behavior.DROWSY, SAMPLE_RATE_HZ, CHANNELS,
                               np.column_stack([lat, lon])))

    lat, lon = _noise_pair(PULSE_TRIP_LEN, 33)
    _plant(lat, lon, 80, BUMP_1)
    _plant(lat, lon, 190, BUMP_2)
    trips.append(TripRecording("d1_norm", "D1", Route.MOTORWAY,
                               Behavior.NORMAL, SAMPLE_RATE_HZ, CHANNELS,
                               np.column_stack([lat, lon])))

    trips.append(make_pulse_trip("d2_test", "D2", Behavior.AGGRESSIVE, seed=45))
    return trips


def write_corpus(base_dir, trips) -> tuple[str, str]:
    """Write trips and metadata in the loader's CSV layout; returns paths."""
    trips_dir = base_dir / "trips"
    trips_dir.mkdir(parents=True, exist_ok=True)
    for trip in trips:
        path = trips_dir / f"{trip.trip_id}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["timestamp", *trip.channel_names])
            step = 1.0 / trip.sample_rate_hz
            for i in range(trip.n_samples):
                row = [repr(i * step)]
                row.extend(repr(float(v)) for v in trip.samples[i])
                writer.writerow(row)
    meta_path = base_dir / "metadata.csv"
    with open(meta_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trip_id", "driver_id", "route", "behavior"])
        for trip in trips:
            writer.writerow([trip.trip_id, trip.driver_id, trip.route.value,
                             trip.behavior.value if trip.behavior else ""])
    return str(trips_dir), str(meta_path)
