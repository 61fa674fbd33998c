"""Command line interface: extract, summarize, and analyze stages."""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Any, Callable

import click

from . import pipeline, storage
from .config import build_config, load_config_values
from .errors import MetadataError, TripLoadError, TripmdError, ValidationError

_VALIDATION_ERRORS = (ValidationError, TripLoadError, MetadataError)


def _config_options(fn: Callable) -> Callable:
    options = [
        click.option("--config", "config_path", type=click.Path(), default=None,
                     help="JSON config file; a manifest from a previous run works too."),
        click.option("--trips", "trips_dir", default=None, help="Directory of trip CSV files."),
        click.option("--metadata", "metadata_path", default=None, help="Trip metadata CSV."),
        click.option("--channels", default=None,
                     help="Comma-separated channel columns to ingest (default: all)."),
        click.option("--input-rate-hz", type=float, default=None,
                     help="Sample rate of the trip files."),
        click.option("--target-rate-hz", type=float, default=None,
                     help="Rate to downsample to (default: keep the input rate)."),
        click.option("--letter-seconds", type=float, default=None,
                     help="Letter window length in seconds (default 1)."),
        click.option("--min-pattern-size", type=int, default=None,
                     help="Smallest pattern size searched (default 3)."),
        click.option("--radius", type=float, default=None,
                     help="Motif radius (default: estimated from the data)."),
        click.option("--radius-percentile", type=float, default=None,
                     help="Percentile of probe pair distances for the estimate (default 0.5)."),
        click.option("--epochs", type=int, default=None, help="Map training epochs (default 20)."),
        click.option("--dtw-window-seconds", type=float, default=None,
                     help="Warping band in seconds (default: one letter)."),
        click.option("--seed", type=int, default=None, help="Random seed (default 0)."),
        click.option("--test-driver", default=None,
                     help="Driver id whose trips are held out and scored."),
        click.option("--n-bootstrap", type=int, default=None,
                     help="Bootstrap rounds for score stability (default 1000; 0 disables)."),
        click.option("--out", "out_dir", default=None, help="Run directory for all artifacts."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _build(stage: str, config_path: str | None, flags: dict[str, Any]) -> Any:
    layers = []
    if config_path is not None:
        layers.append(load_config_values(config_path))
    elif stage != "extract" and flags.get("out_dir"):
        # Later stages pick up the run's own manifest unless told otherwise.
        manifest_path = Path(flags["out_dir"]) / storage.MANIFEST_NAME
        if manifest_path.is_file():
            layers.append(load_config_values(manifest_path))
    layers.append(flags)
    return build_config(*layers)


def _run(stage: str, fn: Callable[[], dict]) -> None:
    try:
        manifest = fn()
    except _VALIDATION_ERRORS as exc:
        click.echo(f"tripmd {stage}: validation error: {exc}", err=True)
        sys.exit(1)
    except TripmdError as exc:
        click.echo(f"tripmd {stage}: error: {exc}", err=True)
        sys.exit(2)
    except Exception as exc:  # pragma: no cover - last-resort stage naming
        click.echo(f"tripmd {stage}: error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(2)
    info = manifest["stages"][stage]
    out_dir = manifest["config"]["out_dir"]
    summary = ", ".join(f"{k}={v}" for k, v in sorted(info.items()))
    click.echo(f"tripmd {stage}: done ({summary}) -> {out_dir}")


@click.group()
def cli() -> None:
    """Motif discovery and behavior summaries for driving-trip recordings."""


@cli.command()
@_config_options
@click.option("--export-vsax", is_flag=True, help="Also write per-trip letter tables.")
def extract(config_path: str | None, export_vsax: bool, **flags: Any) -> None:
    """Mine motifs from trip files into a run directory."""
    _run("extract", lambda: pipeline.run_extract(_build("extract", config_path, flags), export_vsax))


@cli.command()
@_config_options
def summarize(config_path: str | None, **flags: Any) -> None:
    """Rank, prune, and map the motifs of an extract run."""
    _run("summarize", lambda: pipeline.run_summarize(_build("summarize", config_path, flags)))


@cli.command()
@_config_options
def analyze(config_path: str | None, **flags: Any) -> None:
    """Score a held-out driver's trips from a summarize run."""
    _run("analyze", lambda: pipeline.run_analyze(_build("analyze", config_path, flags)))


def main() -> None:
    cli(prog_name="tripmd")


if __name__ == "__main__":
    main()
