"""Variable-length symbolic encoding of multichannel trips.

Each channel gets a five-region alphabet cut at pooled value percentiles;
fixed-size windows are averaged per channel, mapped to symbol tuples, and
adjacent windows with identical tuples merge into one variable-length letter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError
from .trips import SubseqRef, TripRecording

ALPHABET_SIZE = 5
BREAKPOINT_PERCENTILES = (5.0, 15.0, 85.0, 95.0)


@dataclass(frozen=True)
class Breakpoints:
    """Per-channel region edges: d rows of [-inf, b2, b3, b4, b5, +inf].

    A value in [b_i, b_{i+1}) encodes as symbol i (0-based); a value exactly
    on an edge belongs to the region above it. When all four finite edges of
    a channel coincide (constant data), every value maps to the middle symbol.
    """

    edges: np.ndarray

    def __post_init__(self) -> None:
        edges = np.array(self.edges, dtype=float)
        if edges.ndim != 2 or edges.shape[1] != ALPHABET_SIZE + 1:
            raise ValidationError(f"edges must have {ALPHABET_SIZE + 1} columns per channel")
        if not (np.isneginf(edges[:, 0]).all() and np.isposinf(edges[:, -1]).all()):
            raise ValidationError("outer edges must be -inf and +inf")
        inner = edges[:, 1:-1]
        if not np.isfinite(inner).all() or (np.diff(inner, axis=1) < 0).any():
            raise ValidationError("inner edges must be finite and non-decreasing")
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)

    @property
    def n_channels(self) -> int:
        return self.edges.shape[0]

    def symbols(self, means: np.ndarray) -> np.ndarray:
        """Map a (k, d) matrix of window means to 0-based symbol indices."""
        means = np.asarray(means, dtype=float)
        out = np.empty(means.shape, dtype=np.int64)
        for c in range(self.n_channels):
            inner = self.edges[c, 1:-1]
            if inner[0] == inner[-1]:
                out[:, c] = ALPHABET_SIZE // 2
            else:
                out[:, c] = np.searchsorted(inner, means[:, c], side="right")
        return out


@dataclass(frozen=True)
class VsaxLetter:
    """One symbol tuple (one entry per channel) covering a sample span."""

    symbols: tuple[int, ...]
    span: SubseqRef


@dataclass(frozen=True)
class VsaxSequence:
    trip_id: str
    letters: tuple[VsaxLetter, ...]


@dataclass(frozen=True)
class Word:
    """A run of consecutive letters with its union sample span."""

    symbols: tuple[tuple[int, ...], ...]
    span: SubseqRef
    letter_offsets: tuple[int, ...]


def compute_breakpoints(trips: Sequence[TripRecording]) -> Breakpoints:
    """Alphabet edges from per-channel percentiles of values pooled over trips.

    Finite edges are the 5th/15th/85th/95th percentiles (linear interpolation
    between order statistics), so roughly 70% of pooled values land in the
    middle region.
    """
    if not trips:
        raise ValidationError("no trips given")
    names = trips[0].channel_names
    for t in trips:
        if t.channel_names != names:
            raise ValidationError(
                f"trip {t.trip_id}: channels {t.channel_names} do not match {names}"
            )
    edges = np.empty((len(names), ALPHABET_SIZE + 1))
    edges[:, 0] = -np.inf
    edges[:, -1] = np.inf
    for c in range(len(names)):
        pooled = np.concatenate([t.samples[:, c] for t in trips])
        edges[c, 1:-1] = np.percentile(pooled, BREAKPOINT_PERCENTILES)
    return Breakpoints(edges)


def encode(
    trips: Iterable[TripRecording], letter_size: int, breakpoints: Breakpoints
) -> list[VsaxSequence]:
    """Encode each trip as merged letters over non-overlapping windows.

    Windows of ``letter_size`` samples tile each trip from the start; the
    trailing partial window is dropped. Each window's per-channel mean maps
    to a symbol tuple, and consecutive windows with identical tuples merge
    into a single letter spanning their union, so adjacent letters always
    differ and letter spans tile [0, n_windows * letter_size).
    """
    if letter_size < 1:
        raise ValidationError("letter size must be at least 1")
    sequences = []
    for trip in trips:
        if breakpoints.n_channels != trip.n_channels:
            raise ValidationError(
                f"trip {trip.trip_id}: {trip.n_channels} channels vs "
                f"{breakpoints.n_channels} breakpoint rows"
            )
        n_windows = trip.n_samples // letter_size
        if n_windows < 1:
            raise ValidationError(
                f"trip {trip.trip_id}: {trip.n_samples} samples is shorter than one "
                f"letter of {letter_size}"
            )
        means = trip.samples[: n_windows * letter_size].reshape(
            n_windows, letter_size, trip.n_channels
        ).mean(axis=1)
        codes = breakpoints.symbols(means)

        letters = []
        run_start = 0
        for w in range(1, n_windows + 1):
            if w == n_windows or (codes[w] != codes[run_start]).any():
                letters.append(
                    VsaxLetter(
                        symbols=tuple(int(s) for s in codes[run_start]),
                        span=SubseqRef(trip.trip_id, run_start * letter_size, w * letter_size),
                    )
                )
                run_start = w
        sequences.append(VsaxSequence(trip_id=trip.trip_id, letters=tuple(letters)))
    return sequences


def words(sequence: VsaxSequence, size: int) -> list[Word]:
    """All runs of ``size`` consecutive letters, in positional order."""
    if size < 1:
        raise ValidationError("word size must be at least 1")
    letters = sequence.letters
    out = []
    for i in range(len(letters) - size + 1):
        chunk = letters[i : i + size]
        out.append(
            Word(
                symbols=tuple(l.symbols for l in chunk),
                span=SubseqRef(sequence.trip_id, chunk[0].span.start, chunk[-1].span.end),
                letter_offsets=tuple(l.span.start for l in chunk),
            )
        )
    return out
