"""Variable-length motif discovery and map summaries for driving trips."""

from .behavior import (
    BEHAVIOR_ORDER,
    BehaviorScore,
    ClusterBehaviorRates,
    bootstrap_scores,
    cluster_rates,
    score_trips,
    subsequence_counts,
    trip_scores,
)
from .config import RunConfig, build_config, round_half_up
from .dtw import DtwConfig, alignment_path, dtw, pairwise_dtw, widened
from .errors import MetadataError, TripLoadError, TripmdError, ValidationError
from .motifs import Motif, SearchParams, estimate_radius, extract_motifs, get_motif
from .pipeline import run_analyze, run_extract, run_summarize
from .ranking import EncodingStats, RankedMotif, mdl_score, prune, rank_motifs
from .som import Assignment, SomGrid, assign, init_anchor, train, u_matrix, winner_matrix
from .trips import (
    Behavior,
    Route,
    SubseqRef,
    TripRecording,
    downsample,
    load_trips,
    overlap,
    slice_trip,
)
from .vsax import (
    ALPHABET_SIZE,
    Breakpoints,
    VsaxLetter,
    VsaxSequence,
    Word,
    compute_breakpoints,
    encode,
    words,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHABET_SIZE",
    "Assignment",
    "BEHAVIOR_ORDER",
    "Behavior",
    "BehaviorScore",
    "Breakpoints",
    "ClusterBehaviorRates",
    "DtwConfig",
    "EncodingStats",
    "MetadataError",
    "Motif",
    "RankedMotif",
    "Route",
    "RunConfig",
    "SearchParams",
    "SomGrid",
    "SubseqRef",
    "TripLoadError",
    "TripRecording",
    "TripmdError",
    "ValidationError",
    "VsaxLetter",
    "VsaxSequence",
    "Word",
    "alignment_path",
    "assign",
    "bootstrap_scores",
    "build_config",
    "cluster_rates",
    "compute_breakpoints",
    "downsample",
    "dtw",
    "encode",
    "estimate_radius",
    "extract_motifs",
    "get_motif",
    "init_anchor",
    "load_trips",
    "mdl_score",
    "overlap",
    "pairwise_dtw",
    "prune",
    "rank_motifs",
    "round_half_up",
    "run_analyze",
    "run_extract",
    "run_summarize",
    "score_trips",
    "slice_trip",
    "subsequence_counts",
    "train",
    "trip_scores",
    "u_matrix",
    "widened",
    "winner_matrix",
    "words",
]
