"""Feature-space action encoding.

Demonstrations are time-stamped feature samples. They are normalized to a
common time scale, resampled into a fixed number of intermediate goals, and
averaged into a generalized trajectory. A radial basis interpolant provides
continuous access between goals.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateAction,
    DimensionMismatch,
    EmptyDemoSet,
    NonPositiveDuration,
    OutOfRange,
    SingularSystem,
    TooFewSamples,
)

# Condition estimate above which the kernel system is treated as singular.
_CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class Demonstration:
    """One recorded demonstration: m scalar features sampled over time.

    ``times`` is a strictly increasing vector of timestamps in seconds and
    ``features`` an (m, k) array with one row per tracked feature.
    """

    times: np.ndarray
    features: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        features = np.atleast_2d(np.asarray(self.features, dtype=float))
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "features", features)
        if times.ndim != 1 or times.size < 2:
            raise TooFewSamples("a demonstration needs at least two samples")
        if np.any(np.diff(times) <= 0):
            raise ValueError("timestamps must be strictly increasing")
        if features.shape[1] != times.size:
            raise DimensionMismatch(
                f"{times.size} timestamps but {features.shape[1]} feature samples"
            )
        if features.shape[0] < 1:
            raise DimensionMismatch("at least one feature row required")

    @property
    def feature_count(self) -> int:
        return self.features.shape[0]

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])


def load_demonstration_csv(path: str | Path) -> Demonstration:
    """Read a demonstration from CSV with header ``t,f1,...,fm``."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0].strip() != "t":
            raise ValueError(f"{path}: expected header starting with 't'")
        rows = [[float(v) for v in row] for row in reader if row]
    if len(rows) < 2:
        raise TooFewSamples(f"{path}: fewer than two samples")
    data = np.asarray(rows, dtype=float)
    times = data[:, 0]
    if np.any(np.diff(times) <= 0):
        raise ValueError(f"{path}: timestamps must be strictly increasing")
    return Demonstration(times=times, features=data[:, 1:].T)


@dataclass(frozen=True)
class FeatureTrajectory:
    """Dense (m, n) matrix of intermediate goals; column j is goal j."""

    goals: np.ndarray

    def __post_init__(self):
        goals = np.atleast_2d(np.asarray(self.goals, dtype=float))
        object.__setattr__(self, "goals", goals)
        if goals.shape[0] < 1 or goals.shape[1] < 1:
            raise DimensionMismatch("trajectory must be at least 1x1")
        if not np.all(np.isfinite(goals)):
            raise ValueError("trajectory goals must be finite")

    @property
    def feature_count(self) -> int:
        return self.goals.shape[0]

    @property
    def goal_count(self) -> int:
        return self.goals.shape[1]


@dataclass(frozen=True)
class GaussianKernel:
    """phi(r) = exp(-(shape * r)^2); shape 0 degenerates to a constant."""

    shape: float

    def __call__(self, r: np.ndarray | float) -> np.ndarray | float:
        return np.exp(-((self.shape * np.asarray(r)) ** 2))


@dataclass(frozen=True)
class RbfInterpolant:
    """Per-feature radial basis interpolant over scalar abscissae.

    ``nodes`` holds the n strictly increasing abscissae in [0, 1] and
    ``weights`` an (m, n) array so evaluation is ``weights @ phi(|t - nodes|)``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kernel: GaussianKernel

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.atleast_2d(np.asarray(self.weights, dtype=float))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if weights.shape[1] != nodes.size:
            raise DimensionMismatch("one weight column per node required")
        if nodes.size > 1 and np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")

    def __call__(self, t: float) -> np.ndarray:
        """Evaluate the interpolant at scalar abscissa ``t``; returns (m,)."""
        basis = self.kernel(np.abs(t - self.nodes))
        return self.weights @ basis


@dataclass(frozen=True)
class GeneralizedAction:
    """Generalized trajectory plus timing metadata and its interpolant."""

    trajectory: FeatureTrajectory
    d_time: float
    t_min: float
    interpolant: RbfInterpolant

    def __post_init__(self):
        expected = compute_goal_count(self.d_time, self.t_min)
        if self.trajectory.goal_count != expected:
            raise DimensionMismatch(
                f"goal count {self.trajectory.goal_count} inconsistent with "
                f"floor({self.d_time}/{self.t_min}) = {expected}"
            )

    @property
    def goal_count(self) -> int:
        return self.trajectory.goal_count

    @property
    def feature_count(self) -> int:
        return self.trajectory.feature_count


def compute_goal_count(d_time: float, t_min: float) -> int:
    """Number of intermediate goals: floor of the duration over the spacing."""
    if d_time <= 0 or t_min <= 0:
        raise NonPositiveDuration(f"d_time={d_time}, t_min={t_min}")
    n = math.floor(d_time / t_min)
    if n < 1:
        raise DegenerateAction(f"duration {d_time} shorter than spacing {t_min}")
    return n


def goal_nodes(n: int) -> np.ndarray:
    """Normalized abscissae of n goals: j/(n-1), or [0] when n == 1."""
    return np.linspace(0.0, 1.0, n) if n > 1 else np.zeros(1)


def resample(demo: Demonstration, n: int) -> FeatureTrajectory:
    """Linearly resample a demonstration at n equally spaced normalized times."""
    if n < 1:
        raise DegenerateAction(f"goal count must be >= 1, got {n}")
    s = goal_nodes(n)
    t = demo.times[0] + s * (demo.times[-1] - demo.times[0])
    goals = np.vstack(
        [np.interp(t, demo.times, demo.features[i]) for i in range(demo.feature_count)]
    )
    return FeatureTrajectory(goals)


def fit_rbf(
    trajectory: FeatureTrajectory,
    nodes: np.ndarray | None = None,
    shape: float | None = None,
) -> RbfInterpolant:
    """Fit one Gaussian RBF per feature dimension through the goal columns.

    The default shape parameter scales with the node density (shape = n);
    a single-goal trajectory degenerates to a constant interpolant.
    """
    n = trajectory.goal_count
    if nodes is None:
        nodes = goal_nodes(n)
    else:
        nodes = np.asarray(nodes, dtype=float)
    if nodes.size != n:
        raise DimensionMismatch(f"{nodes.size} nodes for {n} goals")
    if shape is None:
        shape = float(n) if n > 1 else 0.0
    kernel = GaussianKernel(shape)
    system = kernel(np.abs(nodes[:, None] - nodes[None, :]))
    if not np.all(np.isfinite(system)) or np.linalg.cond(system) > _CONDITION_LIMIT:
        raise SingularSystem("kernel matrix is numerically singular")
    try:
        weights = np.linalg.solve(system, trajectory.goals.T).T
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    return RbfInterpolant(nodes=nodes, weights=weights, kernel=kernel)


def generalize(demos: list[Demonstration], t_min: float) -> GeneralizedAction:
    """Average time-normalized demonstrations into a generalized action.

    Goal columns are the pointwise arithmetic mean of the resampled
    demonstrations; the goal count follows from the mean duration.
    """
    if not demos:
        raise EmptyDemoSet("at least one demonstration required")
    m = demos[0].feature_count
    for demo in demos[1:]:
        if demo.feature_count != m:
            raise DimensionMismatch(
                f"demonstrations disagree on feature count: {demo.feature_count} != {m}"
            )
    d_time = float(np.mean([demo.duration for demo in demos]))
    n = compute_goal_count(d_time, t_min)
    stacked = np.stack([resample(demo, n).goals for demo in demos])
    trajectory = FeatureTrajectory(stacked.mean(axis=0))
    return GeneralizedAction(
        trajectory=trajectory,
        d_time=d_time,
        t_min=t_min,
        interpolant=fit_rbf(trajectory),
    )


def sample_action(action: GeneralizedAction, t: float) -> np.ndarray:
    """Evaluate the generalized action at normalized time t in [0, 1]."""
    if not 0.0 <= t <= 1.0:
        raise OutOfRange(f"t={t} outside [0, 1]")
    return action.interpolant(t)
