"""Incrementally evolved trajectories.

One joint vector is evolved per intermediate goal. Candidates are scored by
replaying the already-chosen trajectory prefix on a cloned environment,
applying the candidate, and measuring the per-feature distance to the goal
column, with constraint penalties on top. The assembled trajectory is then
replayed once from scratch to produce the reported discrepancy and coverage.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constraints import ConstraintSet, apply_penalty
from .errors import DimensionMismatch
from .evolvers import EvalBudget, OptimizerConfig, run_optimizer
from .recognition import discrepancy
from .simenv import (
    COVERAGE_FEATURES,
    EnvState,
    forward_kinematics,
    mental_execution,
    paint_features,
    reset,
)
from .trajectory import FeatureTrajectory, GeneralizedAction


@dataclass(frozen=True)
class ExecutionPlan:
    """Everything a run needs: action, environment template, optimizer, constraints."""

    action: GeneralizedAction
    env: EnvState
    optimizer: str
    optimizer_config: OptimizerConfig
    constraints: ConstraintSet | None = None
    warm_start: bool = True
    warm_start_sigma: float = 10.0

    def __post_init__(self):
        if self.env.feature_dim != self.action.feature_count:
            raise DimensionMismatch(
                f"environment produces {self.env.feature_dim} features, "
                f"action has {self.action.feature_count}"
            )


@dataclass(frozen=True)
class GoalResult:
    """Outcome of evolving one intermediate goal."""

    index: int
    joints: np.ndarray
    discrepancy: float
    evaluations: int
    generations: int


@dataclass(frozen=True)
class RunReport:
    """Per-goal results plus the end-to-end scores of one seeded run."""

    goal_results: tuple[GoalResult, ...]
    cumulative_evaluations: tuple[int, ...]
    total_discrepancy: float
    painted_percent: float | None
    invalid: bool
    seed: int

    @property
    def total_evaluations(self) -> int:
        return self.cumulative_evaluations[-1] if self.cumulative_evaluations else 0


def _candidate_fitness(
    snapshot: EnvState,
    candidate: np.ndarray,
    goal: np.ndarray,
    q_prev: np.ndarray,
    constraints: ConstraintSet | None,
) -> float:
    """Score one candidate against a goal column from a post-prefix snapshot."""
    env = snapshot.clone()
    observed = mental_execution(env, [candidate])[:, 0]
    raw = float(np.abs(observed - goal).sum())
    if constraints is None:
        return raw
    position = forward_kinematics(env.chain, env.q)
    feasible = constraints.step_feasible(position, q_prev, candidate)
    return apply_penalty(constraints.penalty, raw, feasible)


def goal_fitness(
    env_template: EnvState,
    prefix: list[np.ndarray],
    candidate: np.ndarray,
    goal: np.ndarray,
    constraints: ConstraintSet | None = None,
) -> float:
    """Candidate fitness for one goal: replay the prefix, apply the candidate,
    sum the per-feature absolute differences, then penalize infeasibility."""
    env = env_template.clone()
    if prefix:
        mental_execution(env, prefix)
    q_prev = prefix[-1] if prefix else env.home
    return _candidate_fitness(env, candidate, np.asarray(goal, dtype=float), q_prev, constraints)


def _warm_start_genomes(
    config: OptimizerConfig,
    q_prev: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    sigma: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Half the population jitters around the previous pose, half is uniform."""
    n = config.population_size
    local = n // 2
    jitter = q_prev[None, :] + rng.normal(0.0, sigma, size=(local, lower.size))
    uniform = lower + rng.random((n - local, lower.size)) * (upper - lower)
    return np.clip(np.vstack([jitter, uniform]), lower, upper)


def _trajectory_feasible(
    plan: ExecutionPlan, trajectory: list[np.ndarray], positions: list[np.ndarray]
) -> bool:
    """Whole-trajectory feasibility: every visited position inside the box and
    every joint move (home pose included) under the velocity cap."""
    assert plan.constraints is not None
    previous = plan.env.home
    for q, position in zip(trajectory, positions):
        if not plan.constraints.step_feasible(position, previous, q):
            return False
        previous = q
    return True


def iet_execute(plan: ExecutionPlan, seed: int) -> tuple[np.ndarray, RunReport]:
    """Run the incremental executor and return (joint trajectory, report).

    The returned trajectory has one row per intermediate goal. The report's
    total discrepancy comes from a single fresh replay of the full trajectory
    against the generalized action, penalized if the executed trajectory left
    the feasible space (death penalty marks the run invalid).
    """
    rng = np.random.default_rng(seed)
    config = plan.optimizer_config
    lower = plan.env.chain.lower
    upper = plan.env.chain.upper
    base = reset(plan.env.clone())

    current = base.clone()
    prefix: list[np.ndarray] = []
    goal_results: list[GoalResult] = []
    budget = EvalBudget()
    goals = plan.action.trajectory.goals
    for j in range(plan.action.goal_count):
        goal = goals[:, j]
        q_prev = prefix[-1] if prefix else base.home
        snapshot = current

        def fitness(candidate: np.ndarray, _snapshot=snapshot, _goal=goal, _q_prev=q_prev) -> float:
            return _candidate_fitness(_snapshot, candidate, _goal, _q_prev, plan.constraints)

        init = None
        if plan.warm_start:
            init = _warm_start_genomes(config, q_prev, lower, upper, plan.warm_start_sigma, rng)
        result = run_optimizer(
            plan.optimizer, fitness, config, lower, upper, rng=rng, init_genomes=init
        )
        chosen = result.best_genome
        mental_execution(current, [chosen])
        prefix.append(chosen)
        goal_results.append(
            GoalResult(
                index=j,
                joints=chosen,
                discrepancy=result.best_fitness,
                evaluations=result.budget.true_evaluations,
                generations=result.iterations,
            )
        )
        budget.true_evaluations += result.budget.true_evaluations
        budget.approximated_assignments += result.budget.approximated_assignments
        budget.per_goal.append(result.budget.true_evaluations)

    final_env = base.clone()
    observed = mental_execution(final_env, prefix)
    total = discrepancy(FeatureTrajectory(observed), plan.action.trajectory)
    if plan.constraints is not None:
        positions = [forward_kinematics(base.chain, q) for q in prefix]
        feasible = _trajectory_feasible(plan, prefix, positions)
        total = apply_penalty(plan.constraints.penalty, total, feasible)
    painted = None
    if final_env.features == COVERAGE_FEATURES:
        painted = float(paint_features(final_env)[0])

    report = RunReport(
        goal_results=tuple(goal_results),
        cumulative_evaluations=tuple(np.cumsum(budget.per_goal).tolist()),
        total_discrepancy=total,
        painted_percent=painted,
        invalid=math.isinf(total),
        seed=seed,
    )
    return np.vstack(prefix), report
