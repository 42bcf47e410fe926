"""Experiment runners and the ``bench`` command line."""

from .report import ReportRow, read_report, render_report, write_report
from .runners import RUNNERS, ConfigError, ExperimentConfig

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "RUNNERS",
    "ReportRow",
    "read_report",
    "render_report",
    "write_report",
]
