"""
每个动作的组合集合实体
"""
from dataclasses import dataclass
from typing import Iterator, List, Tuple

import numpy as np

from ..composition.space import CompositionRef
from ..exceptions import InternalError
from .config import SelectionConfig


@dataclass(frozen=True)
class SelectedComposition:
    """被选中的组合"""
    ref: CompositionRef
    similarity: float
    selection_score: float
    weight: float = 1.0


@dataclass(frozen=True)
class ActionCompositionSet:
    """动作的top-k组合，成员顺序即选择顺序"""
    action_id: int
    members: Tuple[SelectedComposition, ...]
    config: SelectionConfig

    def __post_init__(self):
        refs = [m.ref for m in self.members]
        if len(set(refs)) != len(refs):
            raise InternalError(f"动作 {self.action_id} 的组合集合中存在重复组合")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[SelectedComposition]:
        return iter(self.members)

    @property
    def refs(self) -> List[CompositionRef]:
        return [m.ref for m in self.members]

    def ref_set(self) -> frozenset:
        return frozenset(self.refs)

    def object_ids(self) -> np.ndarray:
        return np.array([m.ref.object_id for m in self.members], dtype=np.int64)

    def scene_ids(self) -> np.ndarray:
        return np.array([m.ref.scene_id for m in self.members], dtype=np.int64)

    def similarities(self) -> np.ndarray:
        return np.array([m.similarity for m in self.members], dtype=np.float64)

    def weights(self) -> np.ndarray:
        return np.array([m.weight for m in self.members], dtype=np.float64)
