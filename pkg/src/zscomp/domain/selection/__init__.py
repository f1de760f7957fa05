from .composition_set import ActionCompositionSet, SelectedComposition
from .config import (
    DEFAULT_K_COMPOSITION, DEFAULT_LAMBDA, FULL_POOL, SelectionConfig, SelectionMode,
)
from .selector import (
    select_all_actions, select_top_k, select_top_k_mmr, select_top_k_plain, select_top_k_single,
)
from .top_k import BoundedTopK, rank_descending

__all__ = [
    'ActionCompositionSet',
    'BoundedTopK',
    'DEFAULT_K_COMPOSITION',
    'DEFAULT_LAMBDA',
    'FULL_POOL',
    'SelectedComposition',
    'SelectionConfig',
    'SelectionMode',
    'rank_descending',
    'select_all_actions',
    'select_top_k',
    'select_top_k_mmr',
    'select_top_k_plain',
    'select_top_k_single',
]
