"""Batch experiment engine.

Expands the configured sweep into cells, runs seeded repetitions of each
cell (seed = base seed + repetition index, identical across cells so rows
are paired), and aggregates the per-run reports. Invalid runs, those whose
executed trajectory left the feasible space under a death penalty, are
counted but excluded from the discrepancy and coverage means.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np

from ..iet import ExecutionPlan, RunReport, iet_execute
from .config import (
    build_action,
    build_constraint_set,
    build_environment,
    build_optimizer_config,
    expand_cells,
    validate_config,
)


@dataclass(frozen=True)
class RunRecord:
    """Serializable outcome of a single seeded run."""

    seed: int
    per_goal_evaluations: tuple[int, ...]
    cumulative_evaluations: tuple[int, ...]
    goal_discrepancies: tuple[float, ...]
    generations: tuple[int, ...]
    discrepancy: float
    painted_percent: float | None
    invalid: bool
    trajectory: tuple[tuple[float, ...], ...]

    @property
    def evaluations(self) -> int:
        return self.cumulative_evaluations[-1] if self.cumulative_evaluations else 0


@dataclass(frozen=True)
class CellReport:
    """Aggregated results of one experiment cell (method x constraint values)."""

    label: str
    method: str
    dilatation: float
    max_velocity: float
    runs: tuple[RunRecord, ...]
    mean_evaluations: float
    median_evaluations: float
    mean_discrepancy: float | None
    invalid_count: int
    mean_painted_percent: float | None
    mean_cumulative_evaluations: tuple[float, ...]


@dataclass(frozen=True)
class AggregateReport:
    """Full batch outcome: configuration echo plus per-cell aggregates."""

    config: dict[str, Any]
    cells: tuple[CellReport, ...]


def _record_from_report(trajectory: np.ndarray, report: RunReport) -> RunRecord:
    return RunRecord(
        seed=report.seed,
        per_goal_evaluations=tuple(g.evaluations for g in report.goal_results),
        cumulative_evaluations=report.cumulative_evaluations,
        goal_discrepancies=tuple(g.discrepancy for g in report.goal_results),
        generations=tuple(g.generations for g in report.goal_results),
        discrepancy=report.total_discrepancy,
        painted_percent=report.painted_percent,
        invalid=report.invalid,
        trajectory=tuple(tuple(float(v) for v in row) for row in trajectory),
    )


def _run_single(cfg: dict[str, Any], cell: dict[str, Any], seed: int) -> RunRecord:
    action = build_action(cfg)
    env = build_environment(cfg)
    constraints = build_constraint_set(cfg, action, env, cell["dilatation"],
                                       cell["max_velocity"])
    plan = ExecutionPlan(
        action=action,
        env=env,
        optimizer=cell["method"],
        optimizer_config=build_optimizer_config(cfg),
        constraints=constraints,
        warm_start=cfg["execution"]["warm_start"],
        warm_start_sigma=cfg["execution"]["warm_start_sigma"],
    )
    trajectory, report = iet_execute(plan, seed)
    return _record_from_report(trajectory, report)


def aggregate_cell(cell: dict[str, Any], runs: list[RunRecord]) -> CellReport:
    """Summarize one cell; means over valid runs only, counts over all."""
    valid = [r for r in runs if not r.invalid]
    evaluations = [r.evaluations for r in runs]
    discrepancies = [r.discrepancy for r in valid]
    painted = [r.painted_percent for r in valid if r.painted_percent is not None]
    if runs:
        length = max(len(r.cumulative_evaluations) for r in runs)
        cumulative = tuple(
            float(np.mean([r.cumulative_evaluations[i] for r in runs]))
            for i in range(length)
        )
    else:
        cumulative = ()
    return CellReport(
        label=cell["label"],
        method=cell["method"],
        dilatation=cell["dilatation"],
        max_velocity=cell["max_velocity"],
        runs=tuple(runs),
        mean_evaluations=float(np.mean(evaluations)) if runs else math.nan,
        median_evaluations=float(np.median(evaluations)) if runs else math.nan,
        mean_discrepancy=float(np.mean(discrepancies)) if discrepancies else None,
        invalid_count=len(runs) - len(valid),
        mean_painted_percent=float(np.mean(painted)) if painted else None,
        mean_cumulative_evaluations=cumulative,
    )


def run_batch(config: dict[str, Any], jobs: int = 1) -> AggregateReport:
    """Validate the config, run every cell x repetition, and aggregate.

    With ``jobs`` > 1 the individual runs execute in separate processes;
    results are identical to a sequential run because every run is seeded
    independently and aggregation order is fixed.
    """
    cfg = validate_config(config)
    cells = expand_cells(cfg)
    repetitions = cfg["repetitions"]
    tasks = [(cell_idx, rep) for cell_idx in range(len(cells)) for rep in range(repetitions)]

    results: dict[tuple[int, int], RunRecord] = {}
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {
                (cell_idx, rep): pool.submit(
                    _run_single, cfg, cells[cell_idx], cfg["base_seed"] + rep
                )
                for cell_idx, rep in tasks
            }
            for key, future in futures.items():
                results[key] = future.result()
    else:
        for cell_idx, rep in tasks:
            results[(cell_idx, rep)] = _run_single(cfg, cells[cell_idx],
                                                   cfg["base_seed"] + rep)

    reports = []
    for cell_idx, cell in enumerate(cells):
        runs = [results[(cell_idx, rep)] for rep in range(repetitions)]
        reports.append(aggregate_cell(cell, runs))
    return AggregateReport(config=cfg, cells=tuple(reports))
