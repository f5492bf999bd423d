"""Discrepancy scoring between feature trajectories.

Each feature dimension is aligned independently with classical dynamic time
warping over the pairwise absolute-difference cost matrix; the discrepancy is
the sum of the per-dimension optimal path costs, each normalized by its path
length.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptySequence
from .trajectory import FeatureTrajectory


@dataclass(frozen=True)
class CostMatrix:
    """(n, n') matrix of local costs: rows index the reference sequence."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.atleast_2d(np.asarray(self.entries, dtype=float))
        object.__setattr__(self, "entries", entries)
        if np.any(entries < 0):
            raise ValueError("cost entries must be non-negative")

    @property
    def reference_length(self) -> int:
        return self.entries.shape[0]

    @property
    def observed_length(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class WarpPath:
    """Monotone contiguous alignment path as 0-based (reference, observed) pairs."""

    steps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.steps:
            raise ValueError("a warp path has at least one step")
        if self.steps[0] != (0, 0):
            raise ValueError("path must start at (0, 0)")
        for (i0, j0), (i1, j1) in zip(self.steps, self.steps[1:]):
            if (i1 - i0, j1 - j0) not in ((1, 0), (0, 1), (1, 1)):
                raise ValueError("path steps must move by (1,0), (0,1) or (1,1)")

    @property
    def length(self) -> int:
        return len(self.steps)


def cost_matrix(observed: np.ndarray, reference: np.ndarray) -> CostMatrix:
    """Pairwise L2 costs between scalar sequences: entry (i, j) = |o_j - x_i|."""
    o = np.asarray(observed, dtype=float).ravel()
    x = np.asarray(reference, dtype=float).ravel()
    if o.size == 0 or x.size == 0:
        raise EmptySequence("both sequences must be non-empty")
    return CostMatrix(np.abs(o[None, :] - x[:, None]))


def optimal_path_cost(cm: CostMatrix) -> tuple[WarpPath, float]:
    """Minimum-cost monotone path through the cost matrix and its total cost.

    The cost sums every cell on the path, endpoints included. Equal-cost
    alternatives resolve deterministically: diagonal first, then the
    reference-advancing step, then the observed-advancing step.
    """
    local = cm.entries
    n, n_obs = local.shape
    acc = np.empty_like(local)
    acc[0, 0] = local[0, 0]
    for j in range(1, n_obs):
        acc[0, j] = acc[0, j - 1] + local[0, j]
    for i in range(1, n):
        acc[i, 0] = acc[i - 1, 0] + local[i, 0]
    for i in range(1, n):
        for j in range(1, n_obs):
            acc[i, j] = local[i, j] + min(acc[i - 1, j - 1], acc[i - 1, j], acc[i, j - 1])

    steps = [(n - 1, n_obs - 1)]
    i, j = n - 1, n_obs - 1
    while (i, j) != (0, 0):
        if i == 0:
            j -= 1
        elif j == 0:
            i -= 1
        else:
            diagonal, vertical, horizontal = acc[i - 1, j - 1], acc[i - 1, j], acc[i, j - 1]
            best = min(diagonal, vertical, horizontal)
            if diagonal == best:
                i, j = i - 1, j - 1
            elif vertical == best:
                i -= 1
            else:
                j -= 1
        steps.append((i, j))
    steps.reverse()
    return WarpPath(tuple(steps)), float(acc[n - 1, n_obs - 1])


def discrepancy(observed: FeatureTrajectory, reference: FeatureTrajectory) -> float:
    """Sum over feature dimensions of length-normalized optimal path costs."""
    if observed.feature_count != reference.feature_count:
        raise DimensionMismatch(
            f"observed has {observed.feature_count} features, "
            f"reference has {reference.feature_count}"
        )
    total = 0.0
    for dim in range(reference.feature_count):
        cm = cost_matrix(observed.goals[dim], reference.goals[dim])
        path, cost = optimal_path_cost(cm)
        total += cost / path.length
    return total
