"""Synthetic demonstration and goal generators.

The circular demos stand in for hand-recorded motions: one revolution of a
circle traced inside the default arm's workspace, with isotropic Gaussian
noise per sample. The coverage goal is a generated ramp from zero to full
coverage, since percentage targets have no geometric demonstration.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from ..trajectory import (
    Demonstration,
    FeatureTrajectory,
    GeneralizedAction,
    compute_goal_count,
    fit_rbf,
)

# Mid-yaw vertical half-plane of the default chain's workspace; the circle
# plane is tilted to stay inside the reachable shell (see default_chain).
WORKSPACE_AZIMUTH_DEG = 42.5
CIRCLE_TILT_DEG = 40.0
CIRCLE_RADIAL_OFFSET = 0.40
CIRCLE_HEIGHT = -0.36


def default_circle_frame() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(center, in-plane axis 1, in-plane axis 2) of the default demo circle."""
    alpha = math.radians(WORKSPACE_AZIMUTH_DEG)
    beta = math.radians(CIRCLE_TILT_DEG)
    radial = np.array([math.cos(alpha), math.sin(alpha), 0.0])
    tangential = np.array([-math.sin(alpha), math.cos(alpha), 0.0])
    vertical = np.array([0.0, 0.0, 1.0])
    center = CIRCLE_RADIAL_OFFSET * radial + np.array([0.0, 0.0, CIRCLE_HEIGHT])
    axis_a = math.cos(beta) * radial + math.sin(beta) * vertical
    return center, axis_a, tangential


def generate_wax_demos(
    diameter: float,
    count: int,
    noise_sigma: float,
    duration: float,
    *,
    samples: int = 120,
    revolutions: float = 1.0,
    center: np.ndarray | None = None,
    axis_a: np.ndarray | None = None,
    axis_b: np.ndarray | None = None,
    rng: np.random.Generator | None = None,
) -> list[Demonstration]:
    """Demonstrations of a circular wipe: three Cartesian features (x, y, z).

    With zero noise all demos are identical and, for whole revolutions, the
    first and last samples coincide exactly.
    """
    if diameter <= 0:
        raise ValueError("diameter must be positive")
    if count < 1:
        raise ValueError("count must be at least 1")
    if samples < 2:
        raise ValueError("at least two samples per demo required")
    if rng is None:
        rng = np.random.default_rng(0)
    if center is None or axis_a is None or axis_b is None:
        default_center, default_a, default_b = default_circle_frame()
        center = default_center if center is None else np.asarray(center, dtype=float)
        axis_a = default_a if axis_a is None else np.asarray(axis_a, dtype=float)
        axis_b = default_b if axis_b is None else np.asarray(axis_b, dtype=float)
    radius = diameter / 2.0
    progress = np.linspace(0.0, 1.0, samples)
    # Wrapping the angle fraction keeps whole revolutions exactly closed.
    angle = 2.0 * math.pi * np.mod(revolutions * progress, 1.0)
    ideal = (
        center[:, None]
        + radius * np.cos(angle)[None, :] * axis_a[:, None]
        + radius * np.sin(angle)[None, :] * axis_b[:, None]
    )
    times = np.linspace(0.0, duration, samples)
    demos = []
    for _ in range(count):
        noise = rng.normal(0.0, noise_sigma, size=ideal.shape) if noise_sigma > 0 else 0.0
        demos.append(Demonstration(times=times.copy(), features=ideal + noise))
    return demos


def generate_paint_goal(
    t_min: float, duration: float, ramp_exponent: float = 1.0
) -> GeneralizedAction:
    """Single-feature coverage goal rising monotonically to 100 percent.

    Goal j of n is 100 * (j/n)^exponent for j = 1..n, a linear ramp by
    default.
    """
    n = compute_goal_count(duration, t_min)
    steps = np.arange(1, n + 1) / n
    goals = 100.0 * steps**ramp_exponent
    trajectory = FeatureTrajectory(goals[None, :])
    return GeneralizedAction(
        trajectory=trajectory,
        d_time=duration,
        t_min=t_min,
        interpolant=fit_rbf(trajectory),
    )


def write_demonstration_csv(demo: Demonstration, path: str | Path) -> None:
    """Write a demonstration as CSV with header ``t,f1,...,fm``."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [f"f{i + 1}" for i in range(demo.feature_count)])
        for k in range(demo.times.size):
            writer.writerow([repr(float(demo.times[k]))]
                            + [repr(float(v)) for v in demo.features[:, k]])
