"""
测试视频的真实动作标签
"""
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple

from ..embedding.vocabulary import Vocabulary
from ..exceptions import DataError


class GroundTruth:
    """视频id → 动作id 的映射，动作id均在动作词表范围内"""

    def __init__(self, labels: Mapping[str, int], action_vocab: Vocabulary):
        checked: Dict[str, int] = {}
        for video_id, action_id in labels.items():
            if isinstance(action_id, bool) or not 0 <= int(action_id) < len(action_vocab):
                raise DataError(f"视频 {video_id} 的动作id {action_id} 不在动作词表中",
                                video_id=video_id)
            checked[video_id] = int(action_id)
        self.labels = checked
        self.action_vocab = action_vocab

    @classmethod
    def from_label_pairs(cls, pairs: Iterable[Tuple[str, str]],
                         action_vocab: Vocabulary) -> 'GroundTruth':
        """由 (video_id, action_label) 序列构建

        Raises:
            DataError: 动作标签不在词表中，或视频id重复
        """
        labels: Dict[str, int] = {}
        for video_id, action_label in pairs:
            if video_id in labels:
                raise DataError(f"真实标签中视频 {video_id} 重复", video_id=video_id)
            if action_label not in action_vocab:
                raise DataError(f"视频 {video_id} 的动作 '{action_label}' 不在动作词表中",
                                video_id=video_id)
            labels[video_id] = action_vocab.id_of(action_label)
        return cls(labels, action_vocab)

    def action_of(self, video_id: str) -> int:
        try:
            return self.labels[video_id]
        except KeyError:
            raise DataError(f"视频 {video_id} 没有真实标签", video_id=video_id) from None

    def videos_of(self, action_ids: Iterable[int]) -> List[str]:
        """属于给定动作的视频，保持插入顺序"""
        wanted = set(int(a) for a in action_ids)
        return [v for v, a in self.labels.items() if a in wanted]

    def restrict(self, action_ids: Iterable[int]) -> 'GroundTruth':
        wanted = set(int(a) for a in action_ids)
        return GroundTruth({v: a for v, a in self.labels.items() if a in wanted},
                           self.action_vocab)

    @property
    def video_ids(self) -> List[str]:
        return list(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __contains__(self, video_id: object) -> bool:
        return video_id in self.labels
