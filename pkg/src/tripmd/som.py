"""Self-organizing map over motif centers compared by DTW.

Prototypes are variable-length sequences updated through the DTW alignment,
so their lengths never change; the map summarizes motifs into a small grid
whose neighboring units hold similar shapes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dtw import DtwConfig, _accumulated_cost, _as_matrix, widened
from .errors import ValidationError
from .motifs import Motif

ETA_START = 0.5
ETA_END = 0.01
SIGMA_END = 1.0


def _acc(a: np.ndarray, b: np.ndarray, config: DtwConfig) -> np.ndarray:
    """Accumulated DTW cost of a pair, band opened as far as the pair needs."""
    pair = widened(config, a.shape[0], b.shape[0])
    window = -1 if pair.window is None else int(pair.window)
    return _accumulated_cost(a, b, window)


@dataclass
class SomGrid:
    """Row-major grid of variable-length prototype sequences."""

    rows: int
    cols: int
    units: list[np.ndarray]

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValidationError("grid dimensions must be positive")
        if len(self.units) != self.rows * self.cols:
            raise ValidationError(
                f"{len(self.units)} units for a {self.rows}x{self.cols} grid"
            )

    @property
    def n_units(self) -> int:
        return self.rows * self.cols

    def coords(self, unit_index: int) -> tuple[int, int]:
        return divmod(unit_index, self.cols)


@dataclass(frozen=True)
class Assignment:
    """Best-matching unit index per motif, parallel to the motif list."""

    unit_indices: tuple[int, ...]

    @property
    def total(self) -> int:
        return len(self.unit_indices)


def _motif_key(motif: Motif) -> tuple:
    return (motif.pattern, motif.center)


def init_anchor(anchors: Sequence[Motif], all_motifs: Sequence[Motif], seed: int) -> SomGrid:
    """Square grid seeded from anchor motif centers.

    The side is ceil(sqrt(number of anchors)); the first units in row-major
    order copy the anchor centers in their given order, and any remaining
    units draw uniformly (seeded) from the non-anchor motifs, falling back
    to cycling the anchors when there are none.
    """
    if not anchors:
        raise ValidationError("anchor initialization needs at least one motif")
    side = math.ceil(math.sqrt(len(anchors)))
    units = [np.array(m.center_values, dtype=float) for m in anchors]
    anchor_keys = {_motif_key(m) for m in anchors}
    pool = [m for m in all_motifs if _motif_key(m) not in anchor_keys]
    rng = np.random.default_rng(seed)
    while len(units) < side * side:
        if pool:
            pick = pool[int(rng.integers(0, len(pool)))]
        else:
            pick = anchors[len(units) % len(anchors)]
        units.append(np.array(pick.center_values, dtype=float))
    return SomGrid(rows=side, cols=side, units=units)


def _unit_distances(x: np.ndarray, units: list[np.ndarray], config: DtwConfig) -> list[np.ndarray]:
    """Accumulated DTW cost matrix of x against every unit."""
    return [_acc(x, unit, config) for unit in units]


def _bmu(costs: list[np.ndarray]) -> int:
    distances = [acc[-1, -1] for acc in costs]
    return int(np.argmin(distances))  # first minimum wins ties


def _aligned_means(x: np.ndarray, unit: np.ndarray, acc: np.ndarray) -> np.ndarray:
    """Per prototype index, the mean of the x samples aligned to it."""
    la, lb = x.shape[0], unit.shape[0]
    sums = np.zeros_like(unit)
    counts = np.zeros(lb)
    i, j = la, lb
    pairs = [(i - 1, j - 1)]
    while i > 1 or j > 1:
        diag, up, left = acc[i - 1, j - 1], acc[i - 1, j], acc[i, j - 1]
        if diag <= up and diag <= left:
            i, j = i - 1, j - 1
        elif up <= left:
            i = i - 1
        else:
            j = j - 1
        pairs.append((i - 1, j - 1))
    for xi, uj in pairs:
        sums[uj] += x[xi]
        counts[uj] += 1
    return sums / counts[:, None]


def train(
    grid: SomGrid,
    motifs: Sequence[Motif],
    epochs: int,
    config: DtwConfig = DtwConfig(),
    seed: int = 0,
    eta_start: float = ETA_START,
    eta_end: float = ETA_END,
    sigma_start: float | None = None,
    sigma_end: float = SIGMA_END,
) -> SomGrid:
    """Train a copy of the grid on the motif centers.

    Each epoch presents every center once in a seeded shuffled order. The
    presented center's best-matching unit is found by DTW, then every unit
    moves toward its DTW-aligned means, scaled by the learning rate and a
    Gaussian neighborhood of the winner on the grid. Learning rate and
    neighborhood radius both decay linearly over all update steps; unit
    lengths never change.
    """
    if epochs < 1:
        raise ValidationError("epochs must be at least 1")
    units = [u.copy() for u in grid.units]
    if not motifs:
        return SomGrid(rows=grid.rows, cols=grid.cols, units=units)
    coords = np.array([grid.coords(u) for u in range(grid.n_units)], dtype=float)
    if sigma_start is None:
        sigma_start = max(grid.rows, grid.cols) / 2
    centers = [_as_matrix(m.center_values) for m in motifs]

    rng = np.random.default_rng(seed)
    total_steps = epochs * len(motifs)
    step = 0
    for _ in range(epochs):
        for idx in rng.permutation(len(motifs)):
            x = centers[idx]
            frac = step / (total_steps - 1) if total_steps > 1 else 0.0
            eta = eta_start + (eta_end - eta_start) * frac
            sigma = max(sigma_start + (sigma_end - sigma_start) * frac, 1e-12)
            costs = _unit_distances(x, units, config)
            winner = _bmu(costs)
            grid_sq = ((coords - coords[winner]) ** 2).sum(axis=1)
            influence = eta * np.exp(-grid_sq / (2 * sigma * sigma))
            for u in range(len(units)):
                means = _aligned_means(x, units[u], costs[u])
                units[u] += influence[u] * (means - units[u])
            step += 1
    return SomGrid(rows=grid.rows, cols=grid.cols, units=units)


def assign(grid: SomGrid, motifs: Sequence[Motif], config: DtwConfig = DtwConfig()) -> Assignment:
    """Best-matching unit per motif center; ties pick the lowest unit index."""
    indices = []
    for motif in motifs:
        x = _as_matrix(motif.center_values)
        indices.append(_bmu(_unit_distances(x, grid.units, config)))
    return Assignment(unit_indices=tuple(indices))


def u_matrix(grid: SomGrid, config: DtwConfig = DtwConfig()) -> np.ndarray:
    """Mean DTW distance from each unit to its 4-connected neighbors."""
    out = np.zeros((grid.rows, grid.cols))
    if grid.n_units == 1:
        return out
    cache: dict[tuple[int, int], float] = {}

    def edge(i: int, j: int) -> float:
        key = (min(i, j), max(i, j))
        if key not in cache:
            cache[key] = float(_acc(grid.units[i], grid.units[j], config)[-1, -1])
        return cache[key]

    for r in range(grid.rows):
        for c in range(grid.cols):
            i = r * grid.cols + c
            neighbors = [
                (r + dr) * grid.cols + (c + dc)
                for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1))
                if 0 <= r + dr < grid.rows and 0 <= c + dc < grid.cols
            ]
            out[r, c] = float(np.mean([edge(i, j) for j in neighbors]))
    return out


def winner_matrix(assignment: Assignment, grid: SomGrid) -> np.ndarray:
    """Count of motifs assigned to each unit, shaped like the grid."""
    counts = np.zeros(grid.n_units, dtype=int)
    for u in assignment.unit_indices:
        if not 0 <= u < grid.n_units:
            raise ValidationError(f"unit index {u} outside a {grid.rows}x{grid.cols} grid")
        counts[u] += 1
    return counts.reshape(grid.rows, grid.cols)
