"""Report emission: delimited summaries, a JSON archive, and figures.

``summary.csv`` has one row per experiment cell, ``cumulative.csv`` the mean
cumulative true-evaluation count per intermediate goal, and ``report.json``
the full aggregate including every per-run record and seed so any single run
can be reproduced. Figures render the cumulative-evaluation profiles and the
per-cell summary metrics.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any

from .batch import AggregateReport, CellReport, RunRecord

SUMMARY_COLUMNS = (
    "method",
    "dilatation",
    "max_velocity",
    "mean_evaluations",
    "mean_discrepancy",
    "invalid_count",
    "mean_painted_percent",
)


def _csv_number(value: float | int | None) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "-inf" if value < 0 else "inf"
        if value.is_integer():
            return str(value)
        return repr(value)
    return str(value)


def _encode(value: Any) -> Any:
    """JSON-safe encoding: infinities become the strings 'inf' / '-inf'."""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    return value


def _decode_float(value: Any) -> float:
    if isinstance(value, str):
        return math.inf if value == "inf" else -math.inf
    return float(value)


def _decode_optional_float(value: Any) -> float | None:
    return None if value is None else _decode_float(value)


def report_to_dict(report: AggregateReport) -> dict[str, Any]:
    return {
        "config": _encode(report.config),
        "cells": [
            {
                "configuration": cell.label,
                "method": cell.method,
                "dilatation": _encode(cell.dilatation),
                "max_velocity": _encode(cell.max_velocity),
                "mean_evaluations": _encode(cell.mean_evaluations),
                "median_evaluations": _encode(cell.median_evaluations),
                "mean_discrepancy": _encode(cell.mean_discrepancy),
                "invalid_count": cell.invalid_count,
                "mean_painted_percent": _encode(cell.mean_painted_percent),
                "mean_cumulative_evaluations": _encode(list(cell.mean_cumulative_evaluations)),
                "runs": [
                    {
                        "seed": run.seed,
                        "per_goal_evaluations": list(run.per_goal_evaluations),
                        "cumulative_evaluations": list(run.cumulative_evaluations),
                        "goal_discrepancies": _encode(list(run.goal_discrepancies)),
                        "generations": list(run.generations),
                        "discrepancy": _encode(run.discrepancy),
                        "painted_percent": _encode(run.painted_percent),
                        "invalid": run.invalid,
                        "trajectory": _encode([list(row) for row in run.trajectory]),
                    }
                    for run in cell.runs
                ],
            }
            for cell in report.cells
        ],
    }


def report_from_dict(data: dict[str, Any]) -> AggregateReport:
    """Inverse of :func:`report_to_dict`; reproduces the aggregate exactly."""

    def decode_config(value: Any) -> Any:
        if isinstance(value, dict):
            return {k: decode_config(v) for k, v in value.items()}
        if isinstance(value, list):
            return [decode_config(v) for v in value]
        if value == "inf":
            return math.inf
        if value == "-inf":
            return -math.inf
        return value

    cells = []
    for cell in data["cells"]:
        runs = tuple(
            RunRecord(
                seed=run["seed"],
                per_goal_evaluations=tuple(run["per_goal_evaluations"]),
                cumulative_evaluations=tuple(run["cumulative_evaluations"]),
                goal_discrepancies=tuple(_decode_float(v) for v in run["goal_discrepancies"]),
                generations=tuple(run["generations"]),
                discrepancy=_decode_float(run["discrepancy"]),
                painted_percent=_decode_optional_float(run["painted_percent"]),
                invalid=run["invalid"],
                trajectory=tuple(tuple(float(v) for v in row) for row in run["trajectory"]),
            )
            for run in cell["runs"]
        )
        cells.append(
            CellReport(
                label=cell["configuration"],
                method=cell["method"],
                dilatation=_decode_float(cell["dilatation"]),
                max_velocity=_decode_float(cell["max_velocity"]),
                runs=runs,
                mean_evaluations=_decode_float(cell["mean_evaluations"]),
                median_evaluations=_decode_float(cell["median_evaluations"]),
                mean_discrepancy=_decode_optional_float(cell["mean_discrepancy"]),
                invalid_count=cell["invalid_count"],
                mean_painted_percent=_decode_optional_float(cell["mean_painted_percent"]),
                mean_cumulative_evaluations=tuple(
                    _decode_float(v) for v in cell["mean_cumulative_evaluations"]
                ),
            )
        )
    return AggregateReport(config=decode_config(data["config"]), cells=tuple(cells))


def write_summary_csv(report: AggregateReport, path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_COLUMNS)
        for cell in report.cells:
            writer.writerow([
                cell.method,
                _csv_number(cell.dilatation),
                _csv_number(cell.max_velocity),
                _csv_number(cell.mean_evaluations),
                _csv_number(cell.mean_discrepancy),
                str(cell.invalid_count),
                _csv_number(cell.mean_painted_percent),
            ])


def write_cumulative_csv(report: AggregateReport, path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["configuration", "goal_index", "mean_cumulative_evaluations"])
        for cell in report.cells:
            for goal_index, value in enumerate(cell.mean_cumulative_evaluations):
                writer.writerow([cell.label, str(goal_index), _csv_number(value)])


def write_report_json(report: AggregateReport, path: Path) -> None:
    payload = json.dumps(report_to_dict(report), indent=2, sort_keys=True,
                         allow_nan=False)
    path.write_text(payload + "\n", encoding="utf-8")


def load_report_json(path: Path) -> AggregateReport:
    return report_from_dict(json.loads(path.read_text(encoding="utf-8")))


def render_figures(report: AggregateReport, out_dir: Path) -> list[Path]:
    """Render the cumulative-evaluation profile and per-cell summary bars."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written = []

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for cell in report.cells:
        goals = range(1, len(cell.mean_cumulative_evaluations) + 1)
        ax.plot(goals, cell.mean_cumulative_evaluations, marker="o", label=cell.label)
    ax.set_xlabel("intermediate goal")
    ax.set_ylabel("mean cumulative evaluations")
    ax.set_title("Cumulative evaluations per intermediate goal")
    if report.cells:
        ax.legend(fontsize=7)
    fig.tight_layout()
    path = out_dir / "cumulative_evaluations.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    labels = [cell.label for cell in report.cells]
    means = [cell.mean_evaluations for cell in report.cells]
    ax.bar(range(len(labels)), means, color="tab:blue")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=7)
    ax.set_ylabel("mean evaluations")
    ax.set_title("Mean evaluations per configuration")
    fig.tight_layout()
    path = out_dir / "summary_evaluations.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)
    return written


def emit_reports(report: AggregateReport, out_dir: str | Path,
                 plots: bool = True) -> list[Path]:
    """Write all report artifacts into ``out_dir``; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [out_dir / "summary.csv", out_dir / "cumulative.csv", out_dir / "report.json"]
    write_summary_csv(report, paths[0])
    write_cumulative_csv(report, paths[1])
    write_report_json(report, paths[2])
    if plots:
        paths.extend(render_figures(report, out_dir))
    return paths
