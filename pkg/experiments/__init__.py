from experiments.harness import RunReport, compare_logs, run_experiment
from experiments.spec import ExperimentSpec, Scenario

__all__ = ["ExperimentSpec", "RunReport", "Scenario", "compare_logs", "run_experiment"]
