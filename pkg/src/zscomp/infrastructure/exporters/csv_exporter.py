"""
基础设施层 - CSV导出
浮点数统一以 %.10g 格式化，相同内容得到相同字节
"""
import csv
from pathlib import Path
from typing import Iterable, List, Sequence, Union

from ...domain.embedding.vocabulary import Vocabulary
from ...domain.evaluation.metrics import ActionDelta
from ...domain.evaluation.sweep import SweepPoint
from ...domain.evaluation.trials import TrialReport
from ...domain.inference.scores import Prediction, ScoreMatrix
from ...domain.selection.composition_set import ActionCompositionSet

FLOAT_FORMAT = "%.10g"

PathLike = Union[str, Path]


def _fmt(value: float) -> str:
    return FLOAT_FORMAT % value


def _write_rows(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)


def selection_file_name(action_id: int) -> str:
    """单个动作的组合集合文件名"""
    return f"action_{action_id:04d}.csv"


def write_selection_csv(path: PathLike, comp_set: ActionCompositionSet,
                        action_vocab: Vocabulary, object_vocab: Vocabulary,
                        scene_vocab: Vocabulary) -> None:
    """导出一个动作的组合集合，rank从1开始"""
    action_label = action_vocab.label_of(comp_set.action_id)
    _write_rows(
        path,
        ("action_label", "rank", "object_label", "scene_label", "similarity", "mmr_score"),
        (
            (action_label, rank,
             object_vocab.label_of(m.ref.object_id), scene_vocab.label_of(m.ref.scene_id),
             _fmt(m.similarity), _fmt(m.selection_score))
            for rank, m in enumerate(comp_set, 1)
        ),
    )


def write_scores_csv(path: PathLike, scores: ScoreMatrix, action_vocab: Vocabulary) -> None:
    """长表格式的分数矩阵: video_id,action_label,score"""
    labels = [action_vocab.label_of(a) for a in scores.action_ids]

    def rows():
        for video_id, row in zip(scores.video_ids, scores.scores):
            for label, value in zip(labels, row):
                yield video_id, label, _fmt(value)

    _write_rows(path, ("video_id", "action_label", "score"), rows())


def write_predictions_csv(path: PathLike, predictions: Sequence[Prediction],
                          action_vocab: Vocabulary) -> None:
    _write_rows(path, ("video_id", "predicted_action"),
                ((p.video_id, action_vocab.label_of(p.action_id)) for p in predictions))


def write_delta_csv(path: PathLike, deltas: Sequence[ActionDelta]) -> None:
    """逐动作提升表"""
    _write_rows(
        path,
        ("action_label", "accuracy_a", "accuracy_b", "delta", "num_videos"),
        ((d.action_label, _fmt(d.accuracy_a), _fmt(d.accuracy_b), _fmt(d.delta), d.num_videos)
         for d in deltas),
    )


def write_trial_summary_csv(path: PathLike, reports: Sequence[TrialReport]) -> None:
    """试验汇总（方法 × 子集大小），也用于消融表"""
    rows: List[Sequence[object]] = [
        (r.method, r.subset_size, r.num_trials, _fmt(r.mean), _fmt(r.std)) for r in reports
    ]
    _write_rows(path, ("method", "subset_size", "num_trials", "mean", "std"), rows)


def write_sweep_csv(path: PathLike, points: Sequence[SweepPoint]) -> None:
    _write_rows(path, ("mmr_lambda", "k", "accuracy"),
                ((_fmt(p.mmr_lambda), p.k, _fmt(p.accuracy)) for p in points))
