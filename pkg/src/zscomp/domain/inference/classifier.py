"""
批量分类：对所有视频与动作计算分数矩阵并预测
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ArgumentError, DataError
from ..probability.matrix import ProbabilityMatrix
from ..selection.composition_set import ActionCompositionSet
from .scorer import (
    RankedLabels, composition_terms, concatenate_rows, predict_all,
    score_late_fusion, single_source_terms,
)
from .scores import Method, Prediction, ScoreMatrix, WeightMode

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ActionSupport:
    """一个动作在各方法下的支撑集合"""
    action_id: int
    compositions: Optional[ActionCompositionSet] = None
    objects: Optional[RankedLabels] = None
    scenes: Optional[RankedLabels] = None
    union: Optional[RankedLabels] = None


def classify_batch(objects: Optional[ProbabilityMatrix],
                   scenes: Optional[ProbabilityMatrix],
                   supports: Sequence[ActionSupport],
                   method: Method,
                   clip: bool = False,
                   threads: int = 1) -> Tuple[ScoreMatrix, List[Prediction]]:
    """对一批视频计算全部动作的分数并预测

    视频顺序取自物体矩阵（仅场景方法时取自场景矩阵），另一矩阵按该顺序对齐。
    每个动作的分数列独立计算，结果按动作下标收集，与线程数无关。

    Args:
        objects: 物体概率矩阵，scene_only 时可为None
        scenes: 场景概率矩阵，object_only 时可为None
        supports: 每个动作的支撑集合，顺序即分数矩阵的列顺序
        method: 打分方法
        clip: 是否截断负相似度
        threads: 线程数

    Returns:
        (分数矩阵, 逐视频预测)

    Raises:
        ArgumentError: 缺少方法所需的输入
        LookupFailedError: 某视频在另一矩阵中不存在（带视频id）
    """
    if not supports:
        raise ArgumentError("没有任何动作可供分类")
    if method.needs_objects and objects is None:
        raise ArgumentError(f"方法 {method.value} 需要物体概率矩阵")
    if method.needs_scenes and scenes is None:
        raise ArgumentError(f"方法 {method.value} 需要场景概率矩阵")

    primary = objects if method.needs_objects else scenes
    video_ids = primary.video_ids
    object_values = objects.values if method.needs_objects else None
    scene_values = None
    if method.needs_scenes:
        scene_values = scenes.values if scenes is primary else scenes.aligned_to(video_ids)

    column = _column_function(method, object_values, scene_values, clip)
    if threads > 1 and len(supports) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            columns = list(executor.map(column, supports))
    else:
        columns = [column(support) for support in supports]

    scores = np.column_stack(columns) if columns else np.zeros((len(video_ids), 0))
    matrix = ScoreMatrix(video_ids, [s.action_id for s in supports], scores, method)
    return matrix, predict_all(matrix)


def _column_function(method: Method,
                     object_values: Optional[np.ndarray],
                     scene_values: Optional[np.ndarray],
                     clip: bool) -> Callable[[ActionSupport], np.ndarray]:
    """构造计算单个动作分数列的函数"""

    def require(value, name: str, support: ActionSupport):
        if value is None:
            raise ArgumentError(f"动作 {support.action_id} 缺少 {name} 支撑集合")
        return value

    def compositions(support: ActionSupport) -> np.ndarray:
        comp_set = require(support.compositions, "组合", support)
        if len(comp_set) == 0:
            raise ArgumentError(f"动作 {support.action_id} 的组合集合为空")
        weight_mode = (WeightMode.IN_SCORING
                       if method is Method.COMPOSITIONS_WEIGHTED_SCORING else WeightMode.NONE)
        return composition_terms(object_values, scene_values, comp_set, weight_mode, clip).sum(axis=1)

    def object_only(support: ActionSupport) -> np.ndarray:
        ranked = require(support.objects, "物体", support)
        return single_source_terms(object_values, ranked, clip).sum(axis=1)

    def scene_only(support: ActionSupport) -> np.ndarray:
        ranked = require(support.scenes, "场景", support)
        return single_source_terms(scene_values, ranked, clip).sum(axis=1)

    def concatenation(support: ActionSupport) -> np.ndarray:
        ranked = require(support.union, "拼接", support)
        return single_source_terms(concatenate_rows(object_values, scene_values), ranked, clip).sum(axis=1)

    def late_fusion(support: ActionSupport) -> np.ndarray:
        return score_late_fusion(object_only(support), scene_only(support))

    if method.uses_compositions:
        return compositions
    dispatch = {
        Method.OBJECT_ONLY: object_only,
        Method.SCENE_ONLY: scene_only,
        Method.CONCATENATION: concatenation,
        Method.LATE_FUSION: late_fusion,
    }
    if method not in dispatch:
        raise DataError(f"未知的打分方法: {method}")
    return dispatch[method]
