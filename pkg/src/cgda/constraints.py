"""Feasibility predicates and penalty strategies.

The geometric constraint is an axis-aligned box around the action's solution
points, grown by a fixed dilatation on every axis. The velocity constraint
caps the per-iteration joint-space displacement. Infeasible candidates keep
their raw fitness transformed by the configured penalty.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyPointSet

PENALTY_KINDS = ("death", "static", "additive", "multiplicative")
VELOCITY_NORMS = ("max", "l2")


@dataclass(frozen=True)
class BoundingBox:
    """Per-axis closed interval; infinite bounds mean an unbounded box."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float).ravel()
        upper = np.asarray(self.upper, dtype=float).ravel()
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if lower.size != upper.size:
            raise DimensionMismatch("lower and upper must have equal length")
        if np.any(lower > upper):
            raise ValueError("each axis needs lower <= upper")

    @classmethod
    def unbounded(cls, dim: int = 3) -> "BoundingBox":
        return cls(np.full(dim, -math.inf), np.full(dim, math.inf))

    def contains(self, point: np.ndarray) -> bool:
        p = np.asarray(point, dtype=float).ravel()
        return bool(np.all(p >= self.lower) and np.all(p <= self.upper))


def build_box(solution_points: np.ndarray, dilatation: float) -> BoundingBox:
    """Axis-aligned minimum box around the points, grown by the dilatation."""
    if math.isinf(dilatation):
        return BoundingBox.unbounded()
    points = np.atleast_2d(np.asarray(solution_points, dtype=float))
    if points.size == 0:
        raise EmptyPointSet("a finite dilatation needs at least one point")
    return BoundingBox(points.min(axis=0) - dilatation, points.max(axis=0) + dilatation)


def feasible_position(box: BoundingBox, position: np.ndarray) -> bool:
    """True iff the position lies inside the box, bounds inclusive."""
    return box.contains(position)


@dataclass(frozen=True)
class VelocityLimit:
    """Cap on joint displacement per iteration, degrees; inf disables it."""

    max_step: float
    norm: str = "max"

    def __post_init__(self):
        if self.max_step <= 0:
            raise ValueError("max_step must be positive")
        if self.norm not in VELOCITY_NORMS:
            raise ValueError(f"norm must be one of {VELOCITY_NORMS}")

    @classmethod
    def unlimited(cls) -> "VelocityLimit":
        return cls(math.inf)


def feasible_velocity(limit: VelocityLimit, q_prev: np.ndarray, q_new: np.ndarray) -> bool:
    """True iff the joint displacement from q_prev to q_new respects the cap."""
    a = np.asarray(q_prev, dtype=float).ravel()
    b = np.asarray(q_new, dtype=float).ravel()
    if a.size != b.size:
        raise DimensionMismatch(f"joint vectors of length {a.size} and {b.size}")
    delta = np.abs(b - a)
    if limit.norm == "max":
        magnitude = float(delta.max()) if delta.size else 0.0
    else:
        magnitude = float(np.linalg.norm(delta))
    return magnitude <= limit.max_step


@dataclass(frozen=True)
class PenaltyStrategy:
    """How infeasible candidates are scored; the parameter feeds the
    static/additive and multiplicative kinds."""

    kind: str = "death"
    parameter: float = 0.0

    def __post_init__(self):
        if self.kind not in PENALTY_KINDS:
            raise ValueError(f"kind must be one of {PENALTY_KINDS}")


def apply_penalty(strategy: PenaltyStrategy, raw_fitness: float, feasible: bool) -> float:
    """Feasible candidates keep their fitness; infeasible ones are penalized."""
    if feasible:
        return raw_fitness
    if strategy.kind == "death":
        return math.inf
    if strategy.kind == "multiplicative":
        return raw_fitness * strategy.parameter
    return raw_fitness + strategy.parameter


@dataclass(frozen=True)
class ConstraintSet:
    """Bundle of geometric box, velocity limit, and penalty strategy."""

    box: BoundingBox
    velocity: VelocityLimit
    penalty: PenaltyStrategy

    @classmethod
    def unconstrained(cls) -> "ConstraintSet":
        return cls(BoundingBox.unbounded(), VelocityLimit.unlimited(), PenaltyStrategy("death"))

    def step_feasible(self, position: np.ndarray, q_prev: np.ndarray, q_new: np.ndarray) -> bool:
        return feasible_position(self.box, position) and feasible_velocity(
            self.velocity, q_prev, q_new
        )
