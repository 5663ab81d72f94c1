"""Correlation coefficients used by the heuristic-quality experiment."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata

__all__ = ["pearson", "spearman"]


def _pair(xs, ys):
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"need two 1-D samples of equal length, got {x.shape} and {y.shape}")
    if x.size == 0:
        raise ValueError("empty sample")
    return x, y


def pearson(xs, ys) -> float:
    """Pearson correlation; 0.0 when either sample is constant."""
    x, y = _pair(xs, ys)
    if np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        return 0.0
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    return float(np.clip((dx @ dy) / np.sqrt(sxx * syy), -1.0, 1.0))


def spearman(xs, ys) -> float:
    """Spearman correlation: Pearson on average ranks."""
    x, y = _pair(xs, ys)
    return pearson(rankdata(x), rankdata(y))
