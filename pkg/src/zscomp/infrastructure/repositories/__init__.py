from .ground_truth_repository import GROUND_TRUTH_HEADER, load_ground_truth, write_ground_truth
from .probability_repository import (
    PROBABILITY_FORMATS, load_frame_csv, load_probability_matrix,
    sidecar_path, write_probability_csv, write_zspm,
)

__all__ = [
    'GROUND_TRUTH_HEADER',
    'PROBABILITY_FORMATS',
    'load_frame_csv',
    'load_ground_truth',
    'load_probability_matrix',
    'sidecar_path',
    'write_ground_truth',
    'write_probability_csv',
    'write_zspm',
]
