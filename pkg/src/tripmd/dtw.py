"""Dependent multivariate dynamic time warping with an optional band constraint."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


@dataclass(frozen=True)
class DtwConfig:
    """Band constraint for the warping path; ``window=None`` is unconstrained.

    A window of w only admits path cells with |i - j| <= w, so it must be at
    least the length difference of the two inputs for any path to exist.
    """

    window: int | None = None

    def __post_init__(self) -> None:
        if self.window is not None and self.window < 0:
            raise ValidationError("window must be non-negative")


def widened(config: DtwConfig, len_a: int, len_b: int) -> DtwConfig:
    """Config with the band opened just enough for a path to exist."""
    if config.window is None:
        return config
    need = abs(len_a - len_b)
    if config.window < need:
        return DtwConfig(window=need)
    return config


@njit(cache=True)
def _accumulated_cost(a: np.ndarray, b: np.ndarray, window: int) -> np.ndarray:
    """(la+1) x (lb+1) cumulative cost matrix; window < 0 means unconstrained."""
    la, lb = a.shape[0], b.shape[0]
    d = a.shape[1]
    if window < 0:
        window = la + lb
    acc = np.full((la + 1, lb + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, la + 1):
        j_lo = max(1, i - window)
        j_hi = min(lb, i + window)
        for j in range(j_lo, j_hi + 1):
            sq = 0.0
            for k in range(d):
                diff = a[i - 1, k] - b[j - 1, k]
                sq += diff * diff
            best = acc[i - 1, j - 1]
            if acc[i - 1, j] < best:
                best = acc[i - 1, j]
            if acc[i, j - 1] < best:
                best = acc[i, j - 1]
            acc[i, j] = np.sqrt(sq) + best
    return acc


def _as_matrix(x: np.ndarray | Sequence) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] < 1:
        raise ValidationError("dtw inputs must be non-empty 1-D or 2-D arrays")
    return np.ascontiguousarray(arr)


def _check_pair(a: np.ndarray, b: np.ndarray, config: DtwConfig) -> None:
    if a.shape[1] != b.shape[1]:
        raise ValidationError(f"channel counts differ: {a.shape[1]} vs {b.shape[1]}")
    if config.window is not None and config.window < abs(a.shape[0] - b.shape[0]):
        raise ValidationError(
            f"window {config.window} admits no path for lengths {a.shape[0]} and {b.shape[0]}"
        )


def dtw(a: np.ndarray | Sequence, b: np.ndarray | Sequence, config: DtwConfig = DtwConfig()) -> float:
    """DTW distance between two multichannel sequences.

    The local cost of aligning a pair of samples is the Euclidean norm of
    their difference across channels; path costs add up along steps
    (+1, 0), (0, +1), (+1, +1). Symmetric, zero on identical inputs.
    """
    am, bm = _as_matrix(a), _as_matrix(b)
    _check_pair(am, bm, config)
    window = -1 if config.window is None else int(config.window)
    return float(_accumulated_cost(am, bm, window)[am.shape[0], bm.shape[0]])


def alignment_path(
    a: np.ndarray | Sequence, b: np.ndarray | Sequence, config: DtwConfig = DtwConfig()
) -> tuple[float, list[tuple[int, int]]]:
    """DTW distance plus one optimal path as (a index, b index) pairs.

    The path runs from (0, 0) to (la-1, lb-1) and visits every index of both
    inputs. Ties during backtracking prefer the diagonal step, then the step
    that consumes an ``a`` sample.
    """
    am, bm = _as_matrix(a), _as_matrix(b)
    _check_pair(am, bm, config)
    window = -1 if config.window is None else int(config.window)
    acc = _accumulated_cost(am, bm, window)
    i, j = am.shape[0], bm.shape[0]
    path = [(i - 1, j - 1)]
    while i > 1 or j > 1:
        diag, up, left = acc[i - 1, j - 1], acc[i - 1, j], acc[i, j - 1]
        if diag <= up and diag <= left:
            i, j = i - 1, j - 1
        elif up <= left:
            i = i - 1
        else:
            j = j - 1
        path.append((i - 1, j - 1))
    path.reverse()
    return float(acc[am.shape[0], bm.shape[0]]), path


def pairwise_dtw(items: Sequence[np.ndarray], config: DtwConfig = DtwConfig()) -> np.ndarray:
    """Symmetric matrix of DTW distances with a zero diagonal."""
    matrices = [_as_matrix(x) for x in items]
    n = len(matrices)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            try:
                out[i, j] = out[j, i] = dtw(matrices[i], matrices[j], config)
            except ValidationError as exc:
                raise ValidationError(f"pair ({i}, {j}): {exc}") from exc
    return out
