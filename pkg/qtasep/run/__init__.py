from .runner import SampleRunner
from .stats import EmpiricalDistribution, ecdf, ks_statistic
from .experiment import ExperimentConfig, ExperimentReport, RunManifest, run_experiment, compare, replay, PRESETS
from .logs import setup_logging
