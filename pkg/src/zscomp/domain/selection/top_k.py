"""
有界top-k选择

按块接收分数流，每块先离线筛出不超过k个候选，再与当前结果在线合并，
内存始终为O(k)。排序规则：分数降序，分数相同时按扁平下标（即行优先的
(object_id, scene_id) 字典序）升序。
"""
from typing import Tuple

import numpy as np

from ..exceptions import ArgumentError


class BoundedTopK:
    """保存分数流中最大的k个元素"""

    def __init__(self, k: int):
        if k < 1:
            raise ArgumentError(f"k必须为正整数，实际为 {k}")
        self.k = k
        self._scores = np.empty(0, dtype=np.float64)
        self._indices = np.empty(0, dtype=np.int64)
        self.seen = 0

    def offer_block(self, first_index: int, scores: np.ndarray) -> None:
        """提交一块连续下标的分数

        Args:
            first_index: 块内第一个元素的扁平下标
            scores: 分数，-inf 表示该元素不参与选择
        """
        scores = np.ravel(scores)
        valid = np.flatnonzero(scores != -np.inf)
        self.seen += int(valid.size)
        if valid.size == 0:
            return
        values = scores[valid]
        if values.size > self.k:
            threshold = np.partition(values, values.size - self.k)[values.size - self.k]
            above = np.flatnonzero(values > threshold)
            ties = np.flatnonzero(values == threshold)[: self.k - above.size]
            keep = np.sort(np.concatenate([above, ties]))
            valid, values = valid[keep], values[keep]
        self._merge(values, valid.astype(np.int64) + first_index)

    def _merge(self, scores: np.ndarray, indices: np.ndarray) -> None:
        scores = np.concatenate([self._scores, scores])
        indices = np.concatenate([self._indices, indices])
        order = np.lexsort((indices, -scores))[: self.k]
        self._scores = scores[order]
        self._indices = indices[order]

    def result(self) -> Tuple[np.ndarray, np.ndarray]:
        """返回 (扁平下标, 分数)，已按排序规则排列"""
        return self._indices.copy(), self._scores.copy()

    def __len__(self) -> int:
        return int(self._indices.size)


def rank_descending(scores: np.ndarray, k: int) -> np.ndarray:
    """对一维分数排序并取前k个下标（分数降序，下标升序）"""
    scores = np.asarray(scores, dtype=np.float64)
    selector = BoundedTopK(k)
    selector.offer_block(0, scores)
    indices, _ = selector.result()
    return indices
