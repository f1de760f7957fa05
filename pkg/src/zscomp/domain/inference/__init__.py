from .classifier import ActionSupport, classify_batch
from .scorer import (
    composition_terms, concatenate_rows, predict, predict_all, score_action,
    score_concatenation, score_late_fusion, score_single_source, single_source_terms,
)
from .scores import Method, Prediction, ScoreMatrix, WeightMode

__all__ = [
    'ActionSupport',
    'Method',
    'Prediction',
    'ScoreMatrix',
    'WeightMode',
    'classify_batch',
    'composition_terms',
    'concatenate_rows',
    'predict',
    'predict_all',
    'score_action',
    'score_concatenation',
    'score_late_fusion',
    'score_single_source',
    'single_source_terms',
]
