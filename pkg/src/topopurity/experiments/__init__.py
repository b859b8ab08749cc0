"""Config-driven suites, file formats and the command-line interface."""

from .config import ExperimentConfig, load_config, parse_config
from .suites import SuiteResult, run_oracle_suite, run_theorem_suite

__all__ = ["ExperimentConfig", "SuiteResult", "load_config", "parse_config",
           "run_oracle_suite", "run_theorem_suite"]
