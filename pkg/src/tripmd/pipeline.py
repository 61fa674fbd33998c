"""The three pipeline stages, each reading and writing run-directory artifacts."""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path
from typing import Sequence

from . import storage
from .behavior import bootstrap_scores, score_trips
from .config import RunConfig
from .dtw import DtwConfig
from .errors import ValidationError
from .motifs import PROBE_SECONDS, Motif, SearchParams, estimate_radius, extract_motifs
from .ranking import EncodingStats, RankedMotif, rank_motifs, prune
from .som import assign, init_anchor, train, u_matrix, winner_matrix
from .trips import TripRecording, downsample, load_trips
from .vsax import compute_breakpoints, encode


def _load_corpus(config: RunConfig) -> list[TripRecording]:
    trips = load_trips(
        config.trips_dir, config.metadata_path, config.input_rate_hz, config.channels
    )
    if config.target_rate_hz is not None and config.target_rate_hz != config.input_rate_hz:
        trips = [downsample(t, config.target_rate_hz) for t in trips]
    return trips


def _resolve_radius(
    config: RunConfig, trips: Sequence[TripRecording], dtw_config: DtwConfig
) -> tuple[float, str]:
    if config.radius is not None:
        return config.radius, "user"
    radius = estimate_radius(trips, config.radius_percentile, PROBE_SECONDS, dtw_config)
    if not radius > 0:
        raise ValidationError(
            "estimated radius is zero (degenerate data); pass an explicit radius"
        )
    return radius, "estimated"


def _merge_manifest(out_dir: Path, config: RunConfig, stage: str, info: dict) -> dict:
    manifest_path = out_dir / storage.MANIFEST_NAME
    manifest = storage.read_manifest(manifest_path) if manifest_path.is_file() else {}
    manifest["config"] = config.to_dict()
    manifest.setdefault("stages", {})[stage] = info
    storage.write_manifest(manifest_path, manifest)
    return manifest


def run_extract(config: RunConfig, export_vsax: bool = False) -> dict:
    """Load trips, learn the alphabet, estimate the radius, and mine motifs.

    Writes the motif table, the breakpoint table, optionally the per-trip
    letter tables, and a manifest carrying every resolved parameter.
    """
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    trips = _load_corpus(config)
    channels = trips[0].channel_names
    breakpoints = compute_breakpoints(trips)
    dtw_config = DtwConfig(window=config.dtw_window_samples)
    radius, radius_source = _resolve_radius(config, trips, dtw_config)

    params = SearchParams(
        letter_size=config.letter_size_samples,
        min_pattern_size=config.min_pattern_size,
        radius=radius,
        dtw_window=config.dtw_window_samples,
    )
    motifs = extract_motifs(trips, params, breakpoints)
    sequences = encode(trips, params.letter_size, breakpoints)

    storage.write_motifs(out_dir / storage.MOTIFS_NAME, motifs)
    storage.write_breakpoints(out_dir / storage.BREAKPOINTS_NAME, breakpoints, channels)
    if export_vsax:
        storage.write_vsax_sequences(out_dir / "vsax", sequences, channels)

    resolved = replace(config, radius=radius)
    info = {
        "n_trips": len(trips),
        "channels": list(channels),
        "sample_rate_hz": config.effective_rate_hz,
        "letter_size_samples": config.letter_size_samples,
        "dtw_window_samples": config.dtw_window_samples,
        "radius": radius,
        "radius_source": radius_source,
        "radius_percentile": config.radius_percentile,
        "radius_probe_seconds": PROBE_SECONDS,
        "n_letters": sum(len(s.letters) for s in sequences),
        "n_motifs": len(motifs),
    }
    return _merge_manifest(out_dir, resolved, "extract", info)


def run_summarize(config: RunConfig) -> dict:
    """Rank motifs, prune anchors, and train the map over the motif table."""
    out_dir = Path(config.out_dir)
    trips = _load_corpus(config)
    channels = trips[0].channel_names
    motifs = storage.read_motifs(out_dir / storage.MOTIFS_NAME, trips)
    if not motifs:
        raise ValidationError("the motif table is empty; nothing to summarize")

    breakpoints = compute_breakpoints(trips)
    sequences = encode(trips, config.letter_size_samples, breakpoints)
    stats = EncodingStats(
        n_letters=sum(len(s.letters) for s in sequences), n_channels=len(channels)
    )
    dtw_config = DtwConfig(window=config.dtw_window_samples)
    radius, radius_source = _resolve_radius(config, trips, dtw_config)

    ranked = rank_motifs(motifs, stats)
    anchors = prune(ranked, radius, dtw_config)
    score_by_key = {(r.motif.pattern, r.motif.center): r.mdl_score for r in ranked}
    anchor_entries = [
        RankedMotif(motif=m, mdl_score=score_by_key[(m.pattern, m.center)]) for m in anchors
    ]

    grid = init_anchor(anchors, motifs, config.seed)
    trained = train(grid, motifs, config.epochs, dtw_config, config.seed)
    assignment = assign(trained, motifs, dtw_config)

    storage.write_ranked(out_dir / storage.RANKED_NAME, ranked)
    storage.write_ranked(out_dir / storage.ANCHORS_NAME, anchor_entries)
    storage.write_units(out_dir / storage.UNITS_NAME, trained, channels)
    storage.write_matrix(out_dir / storage.U_MATRIX_NAME, u_matrix(trained, dtw_config))
    storage.write_matrix(out_dir / storage.WINNER_MATRIX_NAME, winner_matrix(assignment, trained))
    storage.write_assignments(out_dir / storage.ASSIGNMENTS_NAME, motifs, assignment)

    resolved = replace(config, radius=radius)
    info = {
        "n_motifs": len(motifs),
        "radius": radius,
        "radius_source": radius_source,
        "n_anchors": len(anchors),
        "grid_rows": trained.rows,
        "grid_cols": trained.cols,
        "epochs": config.epochs,
        "seed": config.seed,
    }
    return _merge_manifest(out_dir, resolved, "summarize", info)


def run_analyze(config: RunConfig) -> dict:
    """Score the held-out driver's trips against the other drivers' labels."""
    if not config.test_driver:
        raise ValidationError("analyze requires a test driver id")
    out_dir = Path(config.out_dir)
    manifest = storage.read_manifest(out_dir / storage.MANIFEST_NAME)
    summarize_info = manifest.get("stages", {}).get("summarize")
    if not summarize_info:
        raise ValidationError(f"no summarize stage recorded in {out_dir}; run summarize first")
    n_units = int(summarize_info["grid_rows"]) * int(summarize_info["grid_cols"])

    trips = _load_corpus(config)
    motifs = storage.read_motifs(out_dir / storage.MOTIFS_NAME, trips)
    if not motifs:
        raise ValidationError("the motif table is empty; nothing to analyze")
    assignment = storage.read_assignments(out_dir / storage.ASSIGNMENTS_NAME, motifs)

    test_trip_ids = {t.trip_id for t in trips if t.driver_id == config.test_driver}
    if not test_trip_ids:
        raise ValidationError(f"no trips for test driver {config.test_driver!r}")
    if len(test_trip_ids) == len(trips):
        raise ValidationError("every trip belongs to the test driver; nothing to train on")

    rates, scores = score_trips(motifs, assignment, trips, test_trip_ids, n_units)
    storage.write_rates(out_dir / storage.RATES_NAME, rates)
    storage.write_scores(out_dir / storage.SCORES_NAME, scores, trips)
    if config.n_bootstrap > 0:
        stats = bootstrap_scores(
            motifs, assignment, trips, test_trip_ids, n_units,
            config.n_bootstrap, config.seed,
        )
        storage.write_bootstrap(out_dir / storage.BOOTSTRAP_NAME, stats)

    info = {
        "test_driver": config.test_driver,
        "n_test_trips": len(test_trip_ids),
        "n_training_trips": len(trips) - len(test_trip_ids),
        "n_bootstrap": config.n_bootstrap,
        "seed": config.seed,
    }
    return _merge_manifest(out_dir, config, "analyze", info)
