"""
推理领域服务：动作打分、预测与基线打分器
"""
from typing import List, Sequence, Tuple, Union

import numpy as np

from ..exceptions import ArgumentError, SchemaError
from ..selection.composition_set import ActionCompositionSet
from .scores import Method, Prediction, ScoreMatrix, WeightMode

RankedLabels = Sequence[Tuple[int, float]]


def composition_terms(objects: np.ndarray, scenes: np.ndarray,
                      comp_set: ActionCompositionSet,
                      weight_mode: WeightMode = WeightMode.NONE,
                      clip: bool = False) -> np.ndarray:
    """每个视频、每个成员组合的打分项 p(c_o|v)·p(c_s|v)·s(c,a)[·w(c)]

    Args:
        objects: |V|×|O| 物体概率（或单行）
        scenes: |V|×|S| 场景概率（或单行）
        comp_set: 动作的组合集合
        weight_mode: 权重位置，IN_SCORING 时乘以组合权重
        clip: 是否把负相似度截断为0

    Returns:
        |V|×k 的打分项矩阵，列顺序即成员顺序
    """
    objects = np.atleast_2d(objects)
    scenes = np.atleast_2d(scenes)
    object_ids, scene_ids = comp_set.object_ids(), comp_set.scene_ids()
    if object_ids.size and (object_ids.max() >= objects.shape[1] or scene_ids.max() >= scenes.shape[1]):
        raise SchemaError(
            f"动作 {comp_set.action_id} 的组合id超出概率矩阵列数 "
            f"({objects.shape[1]}, {scenes.shape[1]})")
    coefficients = comp_set.similarities()
    if clip:
        coefficients = np.maximum(coefficients, 0.0)
    if weight_mode is WeightMode.IN_SCORING:
        coefficients = coefficients * comp_set.weights()
    return objects[:, object_ids] * scenes[:, scene_ids] * coefficients


def score_action(objects_row: np.ndarray, scenes_row: np.ndarray,
                 comp_set: ActionCompositionSet,
                 weight_mode: WeightMode = WeightMode.NONE,
                 clip: bool = False) -> float:
    """动作在视频中的分数 ℓ(a,v) = Σ s(c',a)·p(c'|v)

    Raises:
        ArgumentError: 组合集合为空
        SchemaError: 组合id与概率行不匹配
    """
    if len(comp_set) == 0:
        raise ArgumentError(f"动作 {comp_set.action_id} 的组合集合为空")
    terms = composition_terms(objects_row, scenes_row, comp_set, weight_mode, clip)
    return float(terms.sum(axis=1)[0])


def single_source_terms(rows: np.ndarray, ranked: RankedLabels,
                        clip: bool = False) -> np.ndarray:
    """单一来源的打分项 p(label|v)·s(label,a)"""
    rows = np.atleast_2d(rows)
    ids = np.array([label_id for label_id, _ in ranked], dtype=np.int64)
    sims = np.array([sim for _, sim in ranked], dtype=np.float64)
    if ids.size and ids.max() >= rows.shape[1]:
        raise SchemaError(f"标签id {int(ids.max())} 超出概率矩阵列数 {rows.shape[1]}")
    if clip:
        sims = np.maximum(sims, 0.0)
    return rows[:, ids] * sims


def score_single_source(row: np.ndarray, ranked: RankedLabels, clip: bool = False) -> float:
    """物体或场景单独打分 Σ s(label,a)·p(label|v)"""
    if len(ranked) == 0:
        raise ArgumentError("单一来源的top-k列表为空")
    return float(single_source_terms(row, ranked, clip).sum(axis=1)[0])


def concatenate_rows(objects: np.ndarray, scenes: np.ndarray) -> np.ndarray:
    """拼接物体与场景概率，场景id整体偏移 |O|"""
    return np.hstack([np.atleast_2d(objects), np.atleast_2d(scenes)])


def score_concatenation(objects_row: np.ndarray, scenes_row: np.ndarray,
                        ranked_union: RankedLabels, clip: bool = False) -> float:
    """拼接基线：在 物体⊕场景 的联合标签上做单一来源打分"""
    return score_single_source(concatenate_rows(objects_row, scenes_row), ranked_union, clip)


def score_late_fusion(object_score: Union[float, np.ndarray],
                      scene_score: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """后期融合：两个动作分数的算术平均"""
    return (object_score + scene_score) / 2.0


def predict(scores: ScoreMatrix, video_id: str) -> Prediction:
    """f(v) = argmax_a ℓ(a,v)，同分取最小动作下标"""
    row = scores.row(video_id)
    if row.size == 0:
        raise ArgumentError("分数矩阵中没有动作")
    best = int(np.argmax(row))
    return Prediction(video_id, scores.action_ids[best], float(row[best]), scores.method)


def predict_all(scores: ScoreMatrix) -> List[Prediction]:
    """对矩阵中每个视频做预测"""
    if scores.shape[1] == 0:
        raise ArgumentError("分数矩阵中没有动作")
    best = np.argmax(scores.scores, axis=1)
    return [
        Prediction(video_id, scores.action_ids[int(b)], float(scores.scores[i, b]), scores.method)
        for i, (video_id, b) in enumerate(zip(scores.video_ids, best))
    ]
