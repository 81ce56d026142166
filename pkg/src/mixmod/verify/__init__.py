"""Seeded numerical experiments and their report format."""

from .config import EXPERIMENTS, ConfigError, ExperimentConfig
from .experiments import run_experiment, trial_rng
from .report import REPORT_SCHEMA, Report, TrialRecord, emit_report, report_from_json

__all__ = [
    "EXPERIMENTS",
    "ConfigError",
    "ExperimentConfig",
    "REPORT_SCHEMA",
    "Report",
    "TrialRecord",
    "emit_report",
    "report_from_json",
    "run_experiment",
    "trial_rng",
]
