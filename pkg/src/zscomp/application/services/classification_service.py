"""
应用层 - 分类应用服务

为每种打分方法准备动作的支撑集合，并对视频批量打分、预测与导出。
支撑集合只依赖单个动作，因此按 (方法, k, λ) 缓存，在动作子集之间复用。
"""
import logging
import os
import threading
from typing import Dict, List, Optional, Sequence, Tuple

from ...domain.exceptions import ArgumentError
from ...domain.inference.classifier import ActionSupport, classify_batch
from ...domain.inference.scores import Method, Prediction, ScoreMatrix
from ...domain.probability.matrix import ProbabilityMatrix
from ...domain.selection.composition_set import ActionCompositionSet
from ...domain.selection.selector import select_all_actions, select_top_k_single
from ...infrastructure.exporters.csv_exporter import write_predictions_csv, write_scores_csv
from ...infrastructure.exporters.json_report import write_json_report
from .experiment_context import ExperimentContext

logger = logging.getLogger(__name__)

RankedLabels = List[Tuple[int, float]]


class ClassificationAppService:
    """分类应用服务"""

    def __init__(self, context: ExperimentContext):
        self.context = context
        self.config = context.config
        self._selections: Dict[tuple, List[ActionCompositionSet]] = {}
        self._rankings: Dict[tuple, List[RankedLabels]] = {}
        self._lock = threading.Lock()

    # ------------------------------------------------------------------
    # 支撑集合
    # ------------------------------------------------------------------

    def composition_sets(self, method: Method, k: Optional[int] = None,
                         mmr_lambda: Optional[float] = None) -> List[ActionCompositionSet]:
        """所有动作的组合集合（按动作id顺序）"""
        selection = self.config.selection_config(k=k, mmr_lambda=mmr_lambda, method=method)
        key = tuple(sorted(selection.to_dict().items()))
        with self._lock:
            if key not in self._selections:
                self._selections[key] = select_all_actions(
                    self.context.space, self.context.action_table, selection,
                    threads=self.context.threads)
            return self._selections[key]

    def ranked_labels(self, source: str) -> List[RankedLabels]:
        """单一来源（object | scene | union）在所有动作上的top-k标签"""
        k = {"object": self.config.k_object,
             "scene": self.config.k_scene,
             "union": self.config.k_concatenation}[source]
        key = (source, k)
        with self._lock:
            if key not in self._rankings:
                table = {"object": lambda: self.context.object_table,
                         "scene": lambda: self.context.scene_table,
                         "union": lambda: self.context.union_table}[source]()
                actions = self.context.action_table
                self._rankings[key] = [
                    select_top_k_single(table, table.vocab, actions.vector(a), k)
                    for a in range(len(actions))
                ]
            return self._rankings[key]

    def supports(self, method: Method, action_ids: Optional[Sequence[int]] = None,
                 k: Optional[int] = None,
                 mmr_lambda: Optional[float] = None) -> List[ActionSupport]:
        """给定方法下每个动作的支撑集合"""
        if action_ids is None:
            action_ids = range(len(self.context.action_vocab))
        action_ids = [int(a) for a in action_ids]
        if method.uses_compositions:
            sets = self.composition_sets(method, k, mmr_lambda)
            return [ActionSupport(a, compositions=sets[a]) for a in action_ids]
        objects = self.ranked_labels("object") if method in (
            Method.OBJECT_ONLY, Method.LATE_FUSION) else None
        scenes = self.ranked_labels("scene") if method in (
            Method.SCENE_ONLY, Method.LATE_FUSION) else None
        union = self.ranked_labels("union") if method is Method.CONCATENATION else None
        return [
            ActionSupport(
                a,
                objects=objects[a] if objects is not None else None,
                scenes=scenes[a] if scenes is not None else None,
                union=union[a] if union is not None else None,
            )
            for a in action_ids
        ]

    def warm_up(self, methods: Sequence[Method]) -> None:
        """提前计算支撑集合，之后的并行试验只读缓存"""
        for method in methods:
            self.supports(method, action_ids=[])

    # ------------------------------------------------------------------
    # 打分
    # ------------------------------------------------------------------

    def classify(self, method: Method,
                 action_ids: Optional[Sequence[int]] = None,
                 video_ids: Optional[Sequence[str]] = None,
                 k: Optional[int] = None,
                 mmr_lambda: Optional[float] = None,
                 threads: Optional[int] = None) -> Tuple[ScoreMatrix, List[Prediction]]:
        """对视频在给定动作集合上打分并预测

        Args:
            method: 打分方法
            action_ids: 候选动作（预测只在其中取argmax），默认全部
            video_ids: 参与的视频，默认概率矩阵中的全部视频
            k: 覆盖组合数
            mmr_lambda: 覆盖λ
            threads: 覆盖线程数
        """
        objects = self._matrix("object", method, video_ids)
        scenes = self._matrix("scene", method, video_ids)
        supports = self.supports(method, action_ids, k, mmr_lambda)
        return classify_batch(objects, scenes, supports, method,
                              clip=self.config.clip_similarities,
                              threads=self.context.threads if threads is None else threads)

    def _matrix(self, source: str, method: Method,
                video_ids: Optional[Sequence[str]]) -> Optional[ProbabilityMatrix]:
        needed = method.needs_objects if source == "object" else method.needs_scenes
        if not needed:
            return None
        matrix = self.context.object_matrix if source == "object" else self.context.scene_matrix
        if video_ids is None:
            return matrix
        if len(video_ids) == 0:
            raise ArgumentError("没有可分类的视频")
        return matrix.restrict(video_ids)

    def run(self) -> Dict[str, object]:
        """classify命令：导出分数长表、预测与JSON报告"""
        method = self.config.resolved_method
        scores, predictions = self.classify(method)
        vocab = self.context.action_vocab
        output_dir = self.config.output_dir
        os.makedirs(output_dir, exist_ok=True)
        write_scores_csv(os.path.join(output_dir, "scores.csv"), scores, vocab)
        write_predictions_csv(os.path.join(output_dir, "predictions.csv"), predictions, vocab)
        report = {
            'command': 'classify',
            'method': method.value,
            'num_videos': len(scores.video_ids),
            'num_actions': len(scores.action_ids),
            'config': self.config.to_dict(),
            'predictions': [p.to_dict(vocab.label_of(p.action_id)) for p in predictions],
        }
        write_json_report(os.path.join(output_dir, "classify_report.json"), report)
        logger.info(f"✅ 已对 {len(predictions)} 个视频完成分类 (方法={method.value})")
        return report
