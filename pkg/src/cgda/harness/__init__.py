"""Batch experiment harness: config, generators, runner, reports, CLI."""

from .batch import AggregateReport, CellReport, RunRecord, run_batch
from .config import DEFAULT_CONFIG, load_config, validate_config
from .demos import generate_paint_goal, generate_wax_demos, write_demonstration_csv
from .reports import emit_reports, load_report_json, report_from_dict, report_to_dict

__all__ = [
    "AggregateReport",
    "CellReport",
    "DEFAULT_CONFIG",
    "RunRecord",
    "emit_reports",
    "generate_paint_goal",
    "generate_wax_demos",
    "load_config",
    "load_report_json",
    "report_from_dict",
    "report_to_dict",
    "run_batch",
    "validate_config",
    "write_demonstration_csv",
]
