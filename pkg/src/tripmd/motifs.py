"""Variable-length motif discovery over encoded trips.

Repeated letter patterns propose candidate subsequences; each candidate is
tried as a motif center and keeps, within a fixed distance radius, the
largest set of mutually non-overlapping occurrences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dtw import DtwConfig, dtw, widened
from .errors import ValidationError
from .trips import SubseqRef, TripRecording, overlap, slice_trip, trips_by_id
from .vsax import Breakpoints, encode, words

PROBE_SECONDS = 3.0
MAX_RADIUS_PAIRS = 2_000_000
_SUBSAMPLE_SEED = 0

Pattern = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class SearchParams:
    letter_size: int
    min_pattern_size: int
    radius: float
    dtw_window: int | None = None

    def __post_init__(self) -> None:
        if self.letter_size < 1:
            raise ValidationError("letter size must be at least 1")
        if self.min_pattern_size < 1:
            raise ValidationError("minimum pattern size must be at least 1")
        if not self.radius > 0:
            raise ValidationError("radius must be positive")
        if self.dtw_window is not None and self.dtw_window < 0:
            raise ValidationError("dtw window must be non-negative")


@dataclass(frozen=True)
class Motif:
    """A center subsequence plus non-overlapping occurrences within radius."""

    pattern: Pattern
    center: SubseqRef
    members: tuple[SubseqRef, ...]
    mean_member_distance: float
    center_values: np.ndarray = field(compare=False, repr=False)

    @property
    def pattern_size(self) -> int:
        return len(self.pattern)

    @property
    def occurrence_count(self) -> int:
        return 1 + len(self.members)

    @property
    def occurrences(self) -> tuple[SubseqRef, ...]:
        return (self.center, *self.members)


def estimate_radius(
    trips: Sequence[TripRecording],
    percentile: float = 0.5,
    probe_seconds: float = PROBE_SECONDS,
    config: DtwConfig = DtwConfig(),
    max_pairs: int = MAX_RADIUS_PAIRS,
) -> float:
    """Distance radius as a low percentile of probe pair distances.

    Probes are fixed-length subsequences (``probe_seconds`` at each trip's
    rate) taken back to back from the start of every trip. All unordered
    probe pairs are measured; beyond ``max_pairs`` pairs, a fixed-seed
    uniform subsample of that size is measured instead.
    """
    if not 0 <= percentile <= 100:
        raise ValidationError("percentile must be in [0, 100]")
    probes = []
    for trip in trips:
        length = int(np.floor(probe_seconds * trip.sample_rate_hz + 0.5))
        if length < 1:
            raise ValidationError(
                f"trip {trip.trip_id}: probe of {probe_seconds} s at "
                f"{trip.sample_rate_hz} Hz is empty"
            )
        for start in range(0, trip.n_samples - length + 1, length):
            probes.append(trip.samples[start : start + length])
    n = len(probes)
    if n < 2:
        raise ValidationError("radius estimation needs at least two probes")

    n_pairs = n * (n - 1) // 2
    if n_pairs <= max_pairs:
        pairs = ((i, j) for i in range(n) for j in range(i + 1, n))
        n_eval = n_pairs
    else:
        rng = np.random.default_rng(_SUBSAMPLE_SEED)
        first = []
        second = []
        while len(first) < max_pairs:
            draw = max_pairs - len(first)
            a = rng.integers(0, n, draw * 2)
            b = rng.integers(0, n, draw * 2)
            keep = a != b
            first.extend(a[keep][:draw].tolist())
            second.extend(b[keep][:draw].tolist())
        pairs = zip(first, second)
        n_eval = max_pairs

    distances = np.empty(n_eval)
    for k, (i, j) in enumerate(pairs):
        pair_config = widened(config, probes[i].shape[0], probes[j].shape[0])
        distances[k] = dtw(probes[i], probes[j], pair_config)
    return float(np.percentile(distances, percentile))


def _best_member_set(
    center_idx: int,
    refs: Sequence[SubseqRef],
    distances: np.ndarray,
    radius: float,
) -> list[int]:
    """Largest set of mutually non-overlapping members for one center.

    Candidates overlapping the center or beyond the radius are out; among
    the rest, an earliest-end sweep per trip yields a maximum-cardinality
    non-overlapping selection.
    """
    center = refs[center_idx]
    eligible = [
        k
        for k in range(len(refs))
        if k != center_idx and distances[center_idx, k] <= radius and not overlap(refs[k], center)
    ]
    by_trip: dict[str, list[int]] = {}
    for k in eligible:
        by_trip.setdefault(refs[k].trip_id, []).append(k)
    chosen = []
    for trip_id in sorted(by_trip):
        last_end = -1
        for k in sorted(by_trip[trip_id], key=lambda k: (refs[k].end, refs[k].start)):
            if refs[k].start >= last_end:
                chosen.append(k)
                last_end = refs[k].end
    return chosen


def get_motif(
    pattern: Pattern,
    radius: float,
    candidates: Sequence[tuple[SubseqRef, np.ndarray]],
    config: DtwConfig = DtwConfig(),
) -> Motif | None:
    """Best motif among candidate occurrences of one pattern, if any.

    Every candidate is tried as the center. The winning center has the most
    members; ties prefer a smaller mean member distance, then the earliest
    center position. Returns None when no center attracts any member.
    """
    order = sorted(range(len(candidates)), key=lambda i: candidates[i][0])
    refs = [candidates[i][0] for i in order]
    values = [np.asarray(candidates[i][1], dtype=float) for i in order]
    n = len(refs)
    if n < 2:
        return None

    distances = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            pair_config = widened(config, values[i].shape[0], values[j].shape[0])
            distances[i, j] = distances[j, i] = dtw(values[i], values[j], pair_config)

    best: tuple[int, float, int] | None = None  # (-count, mean, center index)
    best_members: list[int] = []
    for c in range(n):
        members = _best_member_set(c, refs, distances, radius)
        if not members:
            continue
        key = (-len(members), float(np.mean(distances[c, members])), c)
        if best is None or key < best:
            best = key
            best_members = members
    if best is None:
        return None
    c = best[2]
    return Motif(
        pattern=pattern,
        center=refs[c],
        members=tuple(sorted(refs[k] for k in best_members)),
        mean_member_distance=best[1],
        center_values=values[c],
    )


def extract_motifs(
    trips: Sequence[TripRecording], params: SearchParams, breakpoints: Breakpoints
) -> list[Motif]:
    """All motifs over repeated patterns, smallest pattern size first.

    Starting at ``params.min_pattern_size``, every pattern that occurs more
    than once is searched for a motif; the pattern size then grows until no
    pattern of that size repeats. Motifs are ordered by pattern size, then
    pattern; at most one motif exists per pattern.
    """
    by_id = trips_by_id(trips)
    sequences = encode(trips, params.letter_size, breakpoints)
    config = DtwConfig(window=params.dtw_window)

    motifs = []
    size = params.min_pattern_size
    while True:
        buckets: dict[Pattern, list[SubseqRef]] = {}
        for seq in sequences:
            for word in words(seq, size):
                buckets.setdefault(word.symbols, []).append(word.span)
        repeated = {p: spans for p, spans in buckets.items() if len(spans) > 1}
        if not repeated:
            break
        for pattern in sorted(repeated):
            candidates = [
                (span, slice_trip(by_id[span.trip_id], span)) for span in repeated[pattern]
            ]
            motif = get_motif(pattern, params.radius, candidates, config)
            if motif is not None:
                motifs.append(motif)
        size += 1
    return motifs
