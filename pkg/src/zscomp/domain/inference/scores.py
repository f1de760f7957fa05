"""
推理结果值对象
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ArgumentError, DataError, LookupFailedError


class Method(Enum):
    """动作打分方法"""
    COMPOSITIONS = "compositions"
    COMPOSITIONS_WEIGHTED_SCORING = "compositions_weighted_scoring"
    COMPOSITIONS_WEIGHTED_SELECTION = "compositions_weighted_selection"
    OBJECT_ONLY = "object_only"
    SCENE_ONLY = "scene_only"
    CONCATENATION = "concatenation"
    LATE_FUSION = "late_fusion"

    @property
    def uses_compositions(self) -> bool:
        return self.value.startswith("compositions")

    @property
    def needs_objects(self) -> bool:
        return self is not Method.SCENE_ONLY

    @property
    def needs_scenes(self) -> bool:
        return self is not Method.OBJECT_ONLY

    @classmethod
    def resolve(cls, method: 'Method', weight_mode: 'WeightMode') -> 'Method':
        """将 compositions 与权重位置合并为具体方法"""
        if method is cls.COMPOSITIONS:
            if weight_mode is WeightMode.IN_SCORING:
                return cls.COMPOSITIONS_WEIGHTED_SCORING
            if weight_mode is WeightMode.IN_SELECTION:
                return cls.COMPOSITIONS_WEIGHTED_SELECTION
        return method


class WeightMode(Enum):
    """组合权重的使用位置"""
    NONE = "none"
    IN_SCORING = "in_scoring"
    IN_SELECTION = "in_selection"


class ScoreMatrix:
    """视频×动作的分数矩阵 ℓ(a,v)"""

    def __init__(self, video_ids: Sequence[str], action_ids: Sequence[int],
                 scores: np.ndarray, method: Method):
        scores = np.array(scores, dtype=np.float64, copy=True)
        if scores.shape != (len(video_ids), len(action_ids)):
            raise ArgumentError(
                f"分数矩阵形状 {scores.shape} 与 ({len(video_ids)}, {len(action_ids)}) 不一致")
        if not np.all(np.isfinite(scores)):
            r, c = (int(x) for x in np.argwhere(~np.isfinite(scores))[0])
            raise DataError(f"视频 {video_ids[r]} 动作 {action_ids[c]} 的分数非有限",
                            video_id=video_ids[r], coordinates=(r, c))
        scores.setflags(write=False)
        self.video_ids: Tuple[str, ...] = tuple(video_ids)
        self.action_ids: Tuple[int, ...] = tuple(int(a) for a in action_ids)
        self.scores = scores
        self.method = method
        self._index: Dict[str, int] = {v: i for i, v in enumerate(self.video_ids)}

    def row(self, video_id: str) -> np.ndarray:
        try:
            return self.scores[self._index[video_id]]
        except KeyError:
            raise LookupFailedError("视频", video_id) from None

    def restrict_actions(self, action_ids: Sequence[int]) -> 'ScoreMatrix':
        """按给定动作id取列子集"""
        position = {a: i for i, a in enumerate(self.action_ids)}
        try:
            cols = [position[a] for a in action_ids]
        except KeyError as e:
            raise LookupFailedError("动作", str(e.args[0])) from None
        return ScoreMatrix(self.video_ids, action_ids,
                           self.scores[:, cols].reshape(len(self.video_ids), len(cols)),
                           self.method)

    def restrict_videos(self, video_ids: Sequence[str]) -> 'ScoreMatrix':
        """按给定顺序取视频子集"""
        rows = [self._index[v] for v in video_ids]
        return ScoreMatrix(video_ids, self.action_ids,
                           self.scores[rows].reshape(len(rows), len(self.action_ids)),
                           self.method)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.scores.shape


@dataclass(frozen=True)
class Prediction:
    """视频的动作预测 f(v)"""
    video_id: str
    action_id: int
    score: float
    method: Method

    def to_dict(self, action_label: Optional[str] = None) -> Dict[str, object]:
        data: Dict[str, object] = {
            'video_id': self.video_id,
            'action_id': self.action_id,
            'score': self.score,
            'method': self.method.value,
        }
        if action_label is not None:
            data['action_label'] = action_label
        return data
