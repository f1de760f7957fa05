"""
评估指标：准确率与逐动作召回差异
"""
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from ..exceptions import ArgumentError, DataError
from ..inference.scores import Prediction
from .ground_truth import GroundTruth


@dataclass(frozen=True)
class ActionDelta:
    """单个动作在两种方法下的类别准确率及其差值"""
    action_id: int
    action_label: str
    accuracy_a: float
    accuracy_b: float
    delta: float
    num_videos: int

    def to_dict(self) -> Dict[str, object]:
        return {
            'action_id': self.action_id,
            'action_label': self.action_label,
            'accuracy_a': self.accuracy_a,
            'accuracy_b': self.accuracy_b,
            'delta': self.delta,
            'num_videos': self.num_videos,
        }


def accuracy(predictions: Sequence[Prediction], truth: GroundTruth) -> float:
    """top-1准确率

    Raises:
        ArgumentError: 预测为空
        DataError: 预测的视频没有真实标签（带视频id）
    """
    if len(predictions) == 0:
        raise ArgumentError("没有可评估的预测")
    correct = sum(1 for p in predictions if p.action_id == truth.action_of(p.video_id))
    return correct / len(predictions)


def per_class_counts(predictions: Sequence[Prediction],
                     truth: GroundTruth) -> Dict[int, Tuple[int, int]]:
    """每个真实动作的 (正确数, 视频数)"""
    counts: Dict[int, List[int]] = {}
    for p in predictions:
        actual = truth.action_of(p.video_id)
        entry = counts.setdefault(actual, [0, 0])
        entry[0] += int(p.action_id == actual)
        entry[1] += 1
    return {a: (c[0], c[1]) for a, c in counts.items()}


def per_action_delta(predictions_a: Sequence[Prediction],
                     predictions_b: Sequence[Prediction],
                     truth: GroundTruth) -> List[ActionDelta]:
    """逐动作的类别准确率差 acc_a − acc_b

    Returns:
        按差值降序、动作id升序排列的列表

    Raises:
        DataError: 两组预测覆盖的视频不一致
    """
    videos_a = {p.video_id for p in predictions_a}
    videos_b = {p.video_id for p in predictions_b}
    if videos_a != videos_b or len(videos_a) != len(predictions_a) or len(videos_b) != len(predictions_b):
        diverging = sorted(videos_a.symmetric_difference(videos_b))
        raise DataError(
            "两组预测覆盖的视频不一致"
            + (f"，例如 {diverging[0]}" if diverging else "（存在重复视频）"),
            video_id=diverging[0] if diverging else None)

    counts_a = per_class_counts(predictions_a, truth)
    counts_b = per_class_counts(predictions_b, truth)
    rows: List[ActionDelta] = []
    for action_id, (correct_a, total) in counts_a.items():
        correct_b, _ = counts_b[action_id]
        acc_a = correct_a / total
        acc_b = correct_b / total
        rows.append(ActionDelta(
            action_id=action_id,
            action_label=truth.action_vocab.label_of(action_id),
            accuracy_a=acc_a,
            accuracy_b=acc_b,
            delta=acc_a - acc_b,
            num_videos=total,
        ))
    rows.sort(key=lambda r: (-r.delta, r.action_id))
    return rows
