"""Euclidean distance for coordinate data."""

from __future__ import annotations

import numpy as np


def euclidean_rows(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Row-wise L2 distances between two equally shaped 2-D arrays."""
    diff = p - q
    return np.sqrt((diff * diff).sum(axis=1))


def euclidean_distance(p, q) -> float:
    """L2 norm of p - q; dimensions must agree."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"dimension mismatch: {p.shape} vs {q.shape}")
    return float(euclidean_rows(p.reshape(1, -1), q.reshape(1, -1))[0])
