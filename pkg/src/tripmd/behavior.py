"""Behavior scoring of trips from motif cluster membership.

Each map unit earns per-behavior rates from how often labeled training trips
land in it; a test trip's score for a behavior is the rate-weighted sum of
its own unit counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .motifs import Motif
from .som import Assignment
from .trips import Behavior, TripRecording

# Order doubles as argmax tie preference: an aggressive call is never
# silently dropped in favor of an equally scored calmer one.
BEHAVIOR_ORDER = (Behavior.AGGRESSIVE, Behavior.DROWSY, Behavior.NORMAL)


@dataclass(frozen=True)
class ClusterBehaviorRates:
    """Per unit: share of its training subsequences under each behavior.

    ``rates`` has one row per unit and one column per entry of
    ``BEHAVIOR_ORDER``; rows with any training subsequences sum to 1, rows
    without are all zero. ``totals`` holds the training subsequence count
    per unit.
    """

    rates: np.ndarray
    totals: np.ndarray

    def __post_init__(self) -> None:
        rates = np.array(self.rates, dtype=float)
        totals = np.array(self.totals, dtype=float)
        if rates.ndim != 2 or rates.shape[1] != len(BEHAVIOR_ORDER):
            raise ValidationError(f"rates must have {len(BEHAVIOR_ORDER)} columns")
        if totals.shape != (rates.shape[0],):
            raise ValidationError("totals must have one entry per unit")
        rates.setflags(write=False)
        totals.setflags(write=False)
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "totals", totals)

    @property
    def n_units(self) -> int:
        return self.rates.shape[0]


@dataclass(frozen=True)
class BehaviorScore:
    """Per-behavior evidence for one trip, with the argmax as prediction.

    ``predicted`` is None when the trip carries no evidence at all (every
    score is zero), in which case the trip is indeterminate.
    """

    trip_id: str
    scores: Mapping[Behavior, float]
    predicted: Behavior | None

    @property
    def indeterminate(self) -> bool:
        return self.predicted is None


def subsequence_counts(
    assignment: Assignment, motifs: Sequence[Motif], trips: Sequence[TripRecording]
) -> dict[tuple[int, str], int]:
    """Occurrences tallied to (assigned unit, occurrence's trip).

    Every occurrence of a motif (center and members alike) counts once for
    the motif's unit, keyed by the trip the occurrence lies in.
    """
    if assignment.total != len(motifs):
        raise ValidationError(
            f"assignment covers {assignment.total} motifs, got {len(motifs)}"
        )
    known = {t.trip_id for t in trips}
    counts: dict[tuple[int, str], int] = {}
    for motif, unit in zip(motifs, assignment.unit_indices):
        for ref in motif.occurrences:
            if ref.trip_id not in known:
                raise ValidationError(f"occurrence references unknown trip {ref.trip_id!r}")
            key = (unit, ref.trip_id)
            counts[key] = counts.get(key, 0) + 1
    return counts


def cluster_rates(
    counts: Mapping[tuple[int, str], int],
    training_trips: Sequence[TripRecording],
    n_units: int,
) -> ClusterBehaviorRates:
    """Behavior rates per unit from training-trip subsequences only."""
    if n_units < 1:
        raise ValidationError("need at least one unit")
    column = {b: i for i, b in enumerate(BEHAVIOR_ORDER)}
    tallies = np.zeros((n_units, len(BEHAVIOR_ORDER)))
    for trip in training_trips:
        if trip.behavior is None:
            raise ValidationError(f"training trip {trip.trip_id} has no behavior label")
        for unit in range(n_units):
            tallies[unit, column[trip.behavior]] += counts.get((unit, trip.trip_id), 0)
    totals = tallies.sum(axis=1)
    rates = np.divide(
        tallies, totals[:, None], out=np.zeros_like(tallies), where=totals[:, None] > 0
    )
    return ClusterBehaviorRates(rates=rates, totals=totals)


def trip_scores(
    rates: ClusterBehaviorRates, test_counts: np.ndarray, trip_id: str
) -> BehaviorScore:
    """Scores for one test trip from its per-unit subsequence counts.

    Each behavior's score is the sum over units of the unit's behavior rate
    times the trip's count in that unit, so scores are additive in the
    counts. All-zero scores yield an indeterminate prediction; score ties
    resolve in ``BEHAVIOR_ORDER``.
    """
    test_counts = np.asarray(test_counts, dtype=float)
    if test_counts.shape != (rates.n_units,):
        raise ValidationError(f"expected {rates.n_units} per-unit counts")
    values = rates.rates.T @ test_counts
    scores = {b: float(values[i]) for i, b in enumerate(BEHAVIOR_ORDER)}
    predicted = None if values.max() == 0 else BEHAVIOR_ORDER[int(np.argmax(values))]
    return BehaviorScore(trip_id=trip_id, scores=scores, predicted=predicted)


def _counts_vector(
    counts: Mapping[tuple[int, str], int], trip_id: str, n_units: int
) -> np.ndarray:
    vec = np.zeros(n_units)
    for unit in range(n_units):
        vec[unit] = counts.get((unit, trip_id), 0)
    return vec


def score_trips(
    motifs: Sequence[Motif],
    assignment: Assignment,
    trips: Sequence[TripRecording],
    test_trip_ids: set[str],
    n_units: int,
) -> tuple[ClusterBehaviorRates, list[BehaviorScore]]:
    """Train rates on the labeled non-test trips and score every test trip."""
    counts = subsequence_counts(assignment, motifs, trips)
    training = [t for t in trips if t.trip_id not in test_trip_ids]
    rates = cluster_rates(counts, training, n_units)
    scores = [
        trip_scores(rates, _counts_vector(counts, trip_id, n_units), trip_id)
        for trip_id in sorted(test_trip_ids)
    ]
    return rates, scores


def bootstrap_scores(
    motifs: Sequence[Motif],
    assignment: Assignment,
    trips: Sequence[TripRecording],
    test_trip_ids: set[str],
    n_units: int,
    n_samples: int,
    seed: int = 0,
) -> dict[str, dict[Behavior, tuple[float, float]]]:
    """Mean and standard deviation of test-trip scores over motif resamples.

    Every round draws as many motifs as exist, with replacement, from its
    own generator stream keyed by (seed, round index), then recomputes rates
    and test counts from the sampled multiset while unit assignments stay
    fixed. Rounds are therefore independent of evaluation order.
    """
    if n_samples < 1:
        raise ValidationError("need at least one bootstrap round")
    if assignment.total != len(motifs):
        raise ValidationError(
            f"assignment covers {assignment.total} motifs, got {len(motifs)}"
        )
    n = len(motifs)
    if n == 0:
        raise ValidationError("no motifs to resample")
    collected: dict[str, dict[Behavior, list[float]]] = {
        trip_id: {b: [] for b in BEHAVIOR_ORDER} for trip_id in sorted(test_trip_ids)
    }
    for round_index in range(n_samples):
        rng = np.random.default_rng([seed, round_index])
        picks = rng.integers(0, n, n)
        sampled = [motifs[i] for i in picks]
        sampled_assignment = Assignment(
            unit_indices=tuple(assignment.unit_indices[i] for i in picks)
        )
        _, scores = score_trips(sampled, sampled_assignment, trips, test_trip_ids, n_units)
        for score in scores:
            for b in BEHAVIOR_ORDER:
                collected[score.trip_id][b].append(score.scores[b])
    return {
        trip_id: {
            b: (float(np.mean(vals)), float(np.std(vals)))
            for b, vals in by_behavior.items()
        }
        for trip_id, by_behavior in collected.items()
    }
