from .matrix import (
    ROW_SUM_TOLERANCE, FrameProbabilityBlock, ProbabilityMatrix,
    aggregate_frames, composition_likelihood,
)

__all__ = [
    'ROW_SUM_TOLERANCE',
    'FrameProbabilityBlock',
    'ProbabilityMatrix',
    'aggregate_frames',
    'composition_likelihood',
]
