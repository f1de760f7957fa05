from .ground_truth import GroundTruth
from .metrics import ActionDelta, accuracy, per_action_delta, per_class_counts
from .sweep import DEFAULT_SWEEP_LAMBDAS, SweepPoint, sweep_lambda
from .trials import (
    DEFAULT_NUM_TRIALS, TrialReport, run_subset_trials, sample_subsets, subset_hash,
)

__all__ = [
    'ActionDelta',
    'DEFAULT_NUM_TRIALS',
    'DEFAULT_SWEEP_LAMBDAS',
    'GroundTruth',
    'SweepPoint',
    'TrialReport',
    'accuracy',
    'per_action_delta',
    'per_class_counts',
    'run_subset_trials',
    'sample_subsets',
    'subset_hash',
    'sweep_lambda',
]
