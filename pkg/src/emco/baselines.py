"""Vector-space oversampling baselines: ROS, SMOTE, and ADASYN.

These operate directly on tf-idf vectors and therefore cannot leave the
convex hull of the minority sample. Interpolated vectors are deliberately
not re-normalized to unit L2. Neighbor search is a brute-force Euclidean
scan, which is plenty at desk scale; ties are broken by lower index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .vectorize import SparseVector, to_dense


@dataclass(frozen=True)
class NeighborIndex:
    """Brute-force k-nearest-neighbor index over dense reference points."""

    points: np.ndarray  # (n, d)

    def query(self, target: np.ndarray, k: int, exclude: int | None = None) -> np.ndarray:
        """Indices of the k nearest reference points to ``target``.

        ``exclude`` removes one reference row (the query point itself when it
        is a member of the reference set).
        """
        dists = np.linalg.norm(self.points - target, axis=1)
        if exclude is not None:
            dists[exclude] = np.inf
        order = np.argsort(dists, kind="stable")  # stable sort -> lower index on ties
        return order[:k]


def _as_dense(vectors: Sequence[SparseVector], n_features: int) -> np.ndarray:
    return to_dense(vectors, n_features)


def _as_sparse(rows: np.ndarray) -> list[SparseVector]:
    return [SparseVector.from_dense(row) for row in rows]


def ros(
    minority: Sequence[SparseVector], count: int, rng: np.random.Generator
) -> list[SparseVector]:
    """Random oversampling: uniform draws with replacement."""
    if not minority:
        raise ValueError("minority set is empty")
    picks = rng.integers(0, len(minority), size=count)
    return [minority[int(i)] for i in picks]


def smote(
    minority: Sequence[SparseVector],
    count: int,
    k: int,
    rng: np.random.Generator,
    n_features: int,
) -> list[SparseVector]:
    """Synthetic vectors as random convex combinations of neighbor pairs.

    Base points are cycled in order; the partner is drawn uniformly from the
    base point's k nearest minority neighbors (capped at n-1 when the
    minority sample is small).
    """
    n = len(minority)
    if n < 2:
        raise ValueError("smote needs at least two minority vectors")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    k_eff = min(k, n - 1)
    points = _as_dense(minority, n_features)
    index = NeighborIndex(points)
    neighbors = [index.query(points[i], k_eff, exclude=i) for i in range(n)]

    out = np.empty((count, n_features))
    for j in range(count):
        i = j % n
        nn = int(neighbors[i][int(rng.integers(k_eff))])
        u = rng.random()
        out[j] = points[i] + u * (points[nn] - points[i])
    return _as_sparse(out)


def largest_remainder(weights: np.ndarray, total: int) -> np.ndarray:
    """Apportion ``total`` integer units proportionally to ``weights``.

    Ties in fractional remainders go to the lower index; the result always
    sums exactly to ``total``.
    """
    weights = np.asarray(weights, dtype=float)
    if weights.sum() <= 0:
        raise ValueError("weights must have positive sum")
    quotas = total * weights / weights.sum()
    base = np.floor(quotas).astype(int)
    leftover = total - int(base.sum())
    if leftover:
        remainders = quotas - base
        order = np.argsort(-remainders, kind="stable")
        base[order[:leftover]] += 1
    return base


def adasyn(
    minority: Sequence[SparseVector],
    majority: Sequence[SparseVector],
    count: int,
    k: int,
    rng: np.random.Generator,
    n_features: int,
) -> list[SparseVector]:
    """Density-adaptive SMOTE variant.

    Each minority point's share of the synthetic budget is proportional to
    the fraction of its k nearest neighbors (over the full training set) that
    belong to the majority class. When every share is zero the budget is
    split uniformly. Interpolation itself runs among minority neighbors as
    in SMOTE.
    """
    n = len(minority)
    if n < 2:
        raise ValueError("adasyn needs at least two minority vectors")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")

    min_points = _as_dense(minority, n_features)
    maj_points = _as_dense(majority, n_features)
    all_points = np.vstack([min_points, maj_points])
    k_all = min(k, len(all_points) - 1)
    full_index = NeighborIndex(all_points)

    ratios = np.empty(n)
    for i in range(n):
        nn = full_index.query(all_points[i], k_all, exclude=i)
        ratios[i] = np.count_nonzero(nn >= n) / k_all

    if ratios.sum() > 0:
        allot = largest_remainder(ratios, count)
    else:
        allot = largest_remainder(np.ones(n), count)

    k_min = min(k, n - 1)
    min_index = NeighborIndex(min_points)
    neighbors = [min_index.query(min_points[i], k_min, exclude=i) for i in range(n)]

    out = np.empty((count, n_features))
    pos = 0
    for i in range(n):
        for _ in range(int(allot[i])):
            nn = int(neighbors[i][int(rng.integers(k_min))])
            u = rng.random()
            out[pos] = min_points[i] + u * (min_points[nn] - min_points[i])
            pos += 1
    return _as_sparse(out)
