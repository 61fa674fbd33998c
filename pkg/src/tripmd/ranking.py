"""Description-length ranking of motifs and distance-based pruning."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .dtw import DtwConfig, dtw, widened
from .errors import ValidationError
from .motifs import Motif
from .vsax import ALPHABET_SIZE


@dataclass(frozen=True)
class EncodingStats:
    """Corpus-level constants the description length depends on."""

    n_letters: int
    n_channels: int
    alphabet_size: int = ALPHABET_SIZE

    def __post_init__(self) -> None:
        if self.n_letters < 0 or self.n_channels < 1 or self.alphabet_size < 1:
            raise ValidationError("invalid encoding statistics")


@dataclass(frozen=True)
class RankedMotif:
    motif: Motif
    mdl_score: float


def mdl_score(motif: Motif, stats: EncodingStats) -> float:
    """Bits to describe the corpus with this motif as a dictionary entry.

    The motif's pattern costs one plain letter per position; the remaining
    letters, with every occurrence replaced by a single dictionary symbol,
    cost one letter each from an alphabet grown by that symbol. Lower is
    better; more occurrences and longer patterns compress more.
    """
    tuples = stats.alphabet_size ** stats.n_channels
    per_letter = math.log2(tuples)
    per_letter_extended = math.log2(tuples + 1)
    n, w = motif.occurrence_count, motif.pattern_size
    model = w * per_letter
    data = (stats.n_letters - n * w + n) * per_letter_extended
    return model + data


def rank_motifs(motifs: Sequence[Motif], stats: EncodingStats) -> list[RankedMotif]:
    """Motifs sorted by ascending score.

    Ties prefer more occurrences, then a longer pattern, then the earliest
    center position, so the order is total and deterministic.
    """
    ranked = [RankedMotif(motif=m, mdl_score=mdl_score(m, stats)) for m in motifs]
    ranked.sort(
        key=lambda r: (
            r.mdl_score,
            -r.motif.occurrence_count,
            -r.motif.pattern_size,
            r.motif.center,
        )
    )
    return ranked


def prune(
    ranked: Sequence[RankedMotif], radius: float, config: DtwConfig = DtwConfig()
) -> list[Motif]:
    """Best-first selection of motifs with mutually distant centers.

    Walking the ranked list from the best score, a motif is kept only when
    its center is more than twice the radius away from every center kept so
    far, so the first (best-scoring) motif always survives and survivors
    describe distinct shapes.
    """
    kept: list[Motif] = []
    for entry in ranked:
        center = entry.motif.center_values
        distinct = True
        for other in kept:
            pair_config = widened(config, center.shape[0], other.center_values.shape[0])
            if dtw(center, other.center_values, pair_config) <= 2 * radius:
                distinct = False
                break
        if distinct:
            kept.append(entry.motif)
    return kept
