"""Deterministic simulated environment.

A serial chain of revolute joints drives a point end-effector. Feature
extractors read either the end-effector position (geometric actions, the
grasped object moves rigidly with the tool) or the painted fraction of a
planar cell grid (coverage actions). Replaying a joint trajectory from the
same initial state always produces identical features.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, JointLimitViolation, NoWallConfigured

POSITION_FEATURES = "position"
COVERAGE_FEATURES = "coverage"

_AXES = ("X", "Y", "Z")


def _rotation(axis: str, degrees: float) -> np.ndarray:
    """3x3 rotation about a principal axis, angle in degrees."""
    a = math.radians(degrees)
    c, s = math.cos(a), math.sin(a)
    if axis == "X":
        return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    if axis == "Y":
        return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    if axis == "Z":
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    raise ValueError(f"unknown rotation axis {axis!r}")


@dataclass(frozen=True)
class Link:
    """One revolute joint rotating about ``axis`` followed by a rigid segment."""

    length: float
    axis: str

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("link lengths must be non-negative")
        if self.axis not in _AXES:
            raise ValueError(f"axis must be one of {_AXES}, got {self.axis!r}")


@dataclass(frozen=True)
class KinematicChain:
    """Serial revolute chain with per-joint angle limits in degrees."""

    links: tuple[Link, ...]
    joint_limits: np.ndarray
    base_position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    base_orientation_rpy: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        links = tuple(self.links)
        limits = np.asarray(self.joint_limits, dtype=float).reshape(len(links), 2)
        object.__setattr__(self, "links", links)
        object.__setattr__(self, "joint_limits", limits)
        object.__setattr__(
            self, "base_position", np.asarray(self.base_position, dtype=float).reshape(3)
        )
        if not links:
            raise ValueError("chain needs at least one link")
        if np.any(limits[:, 0] >= limits[:, 1]):
            raise ValueError("each joint limit needs min < max")

    @property
    def dof(self) -> int:
        return len(self.links)

    @property
    def lower(self) -> np.ndarray:
        return self.joint_limits[:, 0]

    @property
    def upper(self) -> np.ndarray:
        return self.joint_limits[:, 1]

    def base_rotation(self) -> np.ndarray:
        roll, pitch, yaw = self.base_orientation_rpy
        return _rotation("Z", yaw) @ _rotation("Y", pitch) @ _rotation("X", roll)

    def within_limits(self, q: np.ndarray) -> bool:
        q = np.asarray(q, dtype=float)
        return bool(np.all(q >= self.lower) and np.all(q <= self.upper))

    def clamp(self, q: np.ndarray) -> np.ndarray:
        return np.clip(np.asarray(q, dtype=float), self.lower, self.upper)


def default_chain() -> KinematicChain:
    """Three-revolute desk-scale arm: yaw about Z then two pitches about Y."""
    return KinematicChain(
        links=(Link(0.3, "Z"), Link(0.3, "Y"), Link(0.2, "Y")),
        joint_limits=np.array([[-15.0, 100.0]] * 3),
    )


def forward_kinematics(chain: KinematicChain, q: np.ndarray) -> np.ndarray:
    """End-effector position for joint angles ``q`` (degrees), as (x, y, z)."""
    q = np.asarray(q, dtype=float).ravel()
    if q.size != chain.dof:
        raise DimensionMismatch(f"expected {chain.dof} joint angles, got {q.size}")
    if not chain.within_limits(q):
        raise JointLimitViolation(f"joint vector {q} outside limits")
    rotation = chain.base_rotation()
    position = chain.base_position.copy()
    for link, angle in zip(chain.links, q):
        rotation = rotation @ _rotation(link.axis, angle)
        position = position + rotation @ np.array([link.length, 0.0, 0.0])
    return position


@dataclass
class WallGrid:
    """Planar grid of paintable cells.

    A cell is painted once the tool comes within ``paint_distance`` of its
    center (3-D Euclidean); painted cells never revert within one execution.
    """

    center: np.ndarray
    axis_u: np.ndarray
    axis_v: np.ndarray
    width: float
    height: float
    resolution: int
    paint_distance: float
    painted: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=float).reshape(3)
        u = np.asarray(self.axis_u, dtype=float).reshape(3)
        v = np.asarray(self.axis_v, dtype=float).reshape(3)
        u = u / np.linalg.norm(u)
        v = v - (v @ u) * u
        v = v / np.linalg.norm(v)
        self.axis_u, self.axis_v = u, v
        if self.width <= 0 or self.height <= 0 or self.resolution < 1:
            raise ValueError("wall extent and resolution must be positive")
        if self.paint_distance <= 0:
            raise ValueError("paint distance must be positive")
        if self.painted is None:
            self.painted = np.zeros(self.resolution**2, dtype=bool)
        offsets = ((np.arange(self.resolution) + 0.5) / self.resolution) - 0.5
        su, sv = np.meshgrid(offsets * self.width, offsets * self.height, indexing="ij")
        self._cell_centers = (
            self.center[None, :]
            + su.reshape(-1, 1) * u[None, :]
            + sv.reshape(-1, 1) * v[None, :]
        )

    @property
    def cell_count(self) -> int:
        return self.painted.size

    @property
    def cell_centers(self) -> np.ndarray:
        return self._cell_centers

    def paint_from(self, tool_position: np.ndarray) -> None:
        distances = np.linalg.norm(self._cell_centers - tool_position[None, :], axis=1)
        self.painted |= distances <= self.paint_distance

    def painted_percent(self) -> float:
        return 100.0 * float(self.painted.sum()) / self.cell_count

    def reset(self) -> None:
        self.painted = np.zeros(self.cell_count, dtype=bool)

    def clone(self) -> "WallGrid":
        copy = WallGrid(
            center=self.center.copy(),
            axis_u=self.axis_u.copy(),
            axis_v=self.axis_v.copy(),
            width=self.width,
            height=self.height,
            resolution=self.resolution,
            paint_distance=self.paint_distance,
            painted=self.painted.copy(),
        )
        return copy


@dataclass
class EnvState:
    """Mutable environment owned by a single executor; clones are independent."""

    chain: KinematicChain
    home: np.ndarray
    features: str = POSITION_FEATURES
    wall: WallGrid | None = None
    q: np.ndarray = None
    history: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        self.home = np.asarray(self.home, dtype=float).reshape(self.chain.dof)
        if not self.chain.within_limits(self.home):
            raise JointLimitViolation(f"home pose {self.home} outside limits")
        if self.features not in (POSITION_FEATURES, COVERAGE_FEATURES):
            raise ValueError(f"unknown feature extractor {self.features!r}")
        if self.features == COVERAGE_FEATURES and self.wall is None:
            raise NoWallConfigured("coverage features need a wall")
        if self.q is None:
            self.q = self.home.copy()

    @property
    def feature_dim(self) -> int:
        return 3 if self.features == POSITION_FEATURES else 1

    def tool_position(self) -> np.ndarray:
        return forward_kinematics(self.chain, self.q)

    def observe(self) -> np.ndarray:
        if self.features == POSITION_FEATURES:
            return wax_features(self)
        return paint_features(self)

    def clone(self) -> "EnvState":
        return EnvState(
            chain=self.chain,
            home=self.home.copy(),
            features=self.features,
            wall=self.wall.clone() if self.wall is not None else None,
            q=self.q.copy(),
            history=[q.copy() for q in self.history],
        )


def reset(state: EnvState) -> EnvState:
    """Return the state to its initial pose with an unpainted wall."""
    state.q = state.home.copy()
    state.history = []
    if state.wall is not None:
        state.wall.reset()
    return state


def wax_features(state: EnvState) -> np.ndarray:
    """Cartesian position of the tool (stands in for the object centroid)."""
    return state.tool_position()


def paint_features(state: EnvState) -> np.ndarray:
    """Painted percentage of the wall, as a single-element vector."""
    if state.wall is None:
        raise NoWallConfigured("no wall in this environment")
    return np.array([state.wall.painted_percent()])


def mental_execution(state: EnvState, trajectory: list[np.ndarray]) -> np.ndarray:
    """Replay joint vectors in order and return the features after each step.

    The whole trajectory is validated against joint limits before any state
    change, so a rejection leaves the state untouched.
    """
    vectors = [np.asarray(q, dtype=float).reshape(state.chain.dof) for q in trajectory]
    for q in vectors:
        if not state.chain.within_limits(q):
            raise JointLimitViolation(f"joint vector {q} outside limits")
    columns = []
    for q in vectors:
        state.q = q.copy()
        if state.wall is not None:
            state.wall.paint_from(forward_kinematics(state.chain, q))
        columns.append(state.observe())
        state.history.append(q.copy())
    if not columns:
        return np.empty((state.feature_dim, 0))
    return np.column_stack(columns)
