from .config import ConfigError, RunConfig, load_config
from .suites import SUITES, SuiteReport, run_suite

__all__ = ["ConfigError", "RunConfig", "SUITES", "SuiteReport", "load_config", "run_suite"]
