from .config import ExperimentConfig, dump_config, load_config, parse_config
from .experiment import (CURVE_COLUMNS, TRIAL_COLUMNS, EvaluationResult, LearningCurve,
                         TrialCurve, aggregate_curves, aggregate_runs, evaluate_policy,
                         random_policy_returns, read_trial_csv, run_campaign, run_experiment,
                         run_trial, write_curve_csv)
