"""
视频级概率矩阵与帧聚合
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from ..embedding.vocabulary import Vocabulary
from ..exceptions import ArgumentError, DataError, LookupFailedError, RowRejectedError

logger = logging.getLogger(__name__)

ROW_SUM_TOLERANCE = 1e-3


@dataclass(frozen=True, eq=False)
class FrameProbabilityBlock:
    """单个视频的逐帧softmax输出"""
    video_id: str
    frames: np.ndarray

    def __post_init__(self):
        frames = np.asarray(self.frames, dtype=np.float64)
        if frames.size == 0:
            raise ArgumentError(f"视频 {self.video_id} 没有任何帧")
        if frames.ndim == 1:
            frames = frames.reshape(1, -1)
        if frames.ndim != 2 or frames.shape[0] == 0:
            raise ArgumentError(f"视频 {self.video_id} 没有任何帧")
        if not np.all(np.isfinite(frames)):
            raise DataError(f"视频 {self.video_id} 的帧概率包含非有限值",
                            video_id=self.video_id)
        sums = frames.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_TOLERANCE)
        if bad.size:
            raise RowRejectedError(f"{self.video_id}#frame{int(bad[0])}", float(sums[bad[0]]))
        object.__setattr__(self, 'frames', frames)

    def __len__(self) -> int:
        return int(self.frames.shape[0])


def aggregate_frames(block: FrameProbabilityBlock) -> np.ndarray:
    """对所有帧的softmax输出取逐元素平均

    Args:
        block: 单视频的帧概率

    Returns:
        视频级概率行

    Raises:
        ArgumentError: 帧列表为空
    """
    if len(block) == 0:
        raise ArgumentError(f"视频 {block.video_id} 没有任何帧")
    return block.frames.mean(axis=0)


class ProbabilityMatrix:
    """视频×标签的概率矩阵，每行为平均softmax输出"""

    def __init__(self, video_ids: Sequence[str], vocab: Vocabulary,
                 values: np.ndarray, renormalize: bool = False,
                 tolerance: float = ROW_SUM_TOLERANCE):
        """构造并校验概率矩阵

        Args:
            video_ids: 视频id，与行一一对应
            vocab: 列对应的词表
            values: |V|×|labels| 矩阵
            renormalize: 行和超出容差时是否重新归一化（默认拒绝）
            tolerance: 行和容差

        Raises:
            DataError: 存在非有限值或越界值，或视频id重复
            RowRejectedError: 行和超出容差且未开启重新归一化
        """
        values = np.array(values, dtype=np.float64, copy=True)
        video_ids = tuple(str(v) for v in video_ids)
        if values.ndim != 2 or values.shape[0] != len(video_ids):
            raise ArgumentError(f"概率矩阵形状 {values.shape} 与视频数 {len(video_ids)} 不一致")
        if values.shape[1] != len(vocab):
            raise ArgumentError(f"概率矩阵列数 {values.shape[1]} 与词表大小 {len(vocab)} 不一致")

        index: Dict[str, int] = {}
        for i, video_id in enumerate(video_ids):
            if video_id in index:
                raise DataError(f"视频id重复: {video_id}", video_id=video_id)
            index[video_id] = i

        finite = np.isfinite(values)
        if not finite.all():
            r, c = (int(x) for x in np.argwhere(~finite)[0])
            raise DataError(f"非有限概率值，视频 {video_ids[r]} 第 {c} 列",
                            video_id=video_ids[r], coordinates=(r, c))
        out_of_range = (values < 0.0) | (values > 1.0)
        if out_of_range.any():
            r, c = (int(x) for x in np.argwhere(out_of_range)[0])
            raise DataError(f"概率值 {values[r, c]} 不在[0,1]内，视频 {video_ids[r]} 第 {c} 列",
                            video_id=video_ids[r], coordinates=(r, c))

        sums = values.sum(axis=1)
        bad_rows = np.flatnonzero(np.abs(sums - 1.0) > tolerance)
        for r in bad_rows:
            if not renormalize or sums[r] <= 0.0:
                raise RowRejectedError(video_ids[r], float(sums[r]))
            logger.warning(f"视频 {video_ids[r]} 的概率行之和为 {sums[r]:.6f}，已重新归一化")
            values[r] /= sums[r]

        values.setflags(write=False)
        self.video_ids = video_ids
        self.vocab = vocab
        self.values = values
        self._index = index

    @classmethod
    def from_frames(cls, blocks: Iterable[FrameProbabilityBlock],
                    vocab: Vocabulary) -> 'ProbabilityMatrix':
        """由逐帧数据聚合得到视频级矩阵"""
        ids: List[str] = []
        rows: List[np.ndarray] = []
        for block in blocks:
            ids.append(block.video_id)
            rows.append(aggregate_frames(block))
        values = np.vstack(rows) if rows else np.zeros((0, len(vocab)))
        return cls(ids, vocab, values)

    def row(self, video_id: str) -> np.ndarray:
        """按视频id取概率行"""
        return self.values[self.index_of(video_id)]

    def index_of(self, video_id: str) -> int:
        try:
            return self._index[video_id]
        except KeyError:
            raise LookupFailedError("视频", video_id) from None

    def has_video(self, video_id: str) -> bool:
        return video_id in self._index

    def restrict(self, video_ids: Sequence[str]) -> 'ProbabilityMatrix':
        """按给定顺序取视频子集"""
        rows = [self.index_of(v) for v in video_ids]
        return ProbabilityMatrix(video_ids, self.vocab,
                                 self.values[rows].reshape(len(rows), len(self.vocab)))

    def aligned_to(self, video_ids: Sequence[str]) -> np.ndarray:
        """按给定视频顺序返回值矩阵"""
        return self.values[[self.index_of(v) for v in video_ids]].reshape(
            len(video_ids), len(self.vocab))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def __len__(self) -> int:
        return len(self.video_ids)


def composition_likelihood(objects_row: np.ndarray, scenes_row: np.ndarray,
                           object_id: int, scene_id: int) -> float:
    """组合在视频中的似然 p(c_o|v)·p(c_s|v)

    Args:
        objects_row: 视频的物体概率行
        scenes_row: 视频的场景概率行
        object_id: 物体id
        scene_id: 场景id

    Returns:
        [0,1] 内的似然

    Raises:
        ArgumentError: id越界
    """
    if not 0 <= object_id < len(objects_row):
        raise ArgumentError(f"物体id越界: {object_id}")
    if not 0 <= scene_id < len(scenes_row):
        raise ArgumentError(f"场景id越界: {scene_id}")
    return float(objects_row[object_id]) * float(scenes_row[scene_id])
