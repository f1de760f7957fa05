"""
应用层 - 评估应用服务

evaluate: 全量准确率、与基线的逐动作对比、可选的随机子集试验
ablate:   各打分方法在多个子集大小上的对比表
sweep:    λ × k 网格上的组合方法准确率
"""
import logging
import os
from typing import Dict, List, Optional, Sequence

import numpy as np

from ...domain.evaluation.ground_truth import GroundTruth
from ...domain.evaluation.metrics import accuracy, per_action_delta
from ...domain.evaluation.sweep import SweepPoint, sweep_lambda
from ...domain.evaluation.trials import TrialReport, run_subset_trials
from ...domain.inference.scores import Method, Prediction
from ...infrastructure.exporters.csv_exporter import (
    write_delta_csv, write_sweep_csv, write_trial_summary_csv,
)
from ...infrastructure.exporters.json_report import write_json_report
from .classification_service import ClassificationAppService
from .experiment_context import ExperimentContext

logger = logging.getLogger(__name__)

ABLATION_METHODS = (
    Method.OBJECT_ONLY,
    Method.SCENE_ONLY,
    Method.CONCATENATION,
    Method.LATE_FUSION,
    Method.COMPOSITIONS,
    Method.COMPOSITIONS_WEIGHTED_SCORING,
    Method.COMPOSITIONS_WEIGHTED_SELECTION,
)


class EvaluationAppService:
    """评估应用服务"""

    def __init__(self, context: ExperimentContext,
                 classification: Optional[ClassificationAppService] = None):
        self.context = context
        self.config = context.config
        self.classification = classification or ClassificationAppService(context)

    # ------------------------------------------------------------------
    # 基础
    # ------------------------------------------------------------------

    def _primary_video_ids(self, method: Method) -> List[str]:
        matrix = self.context.object_matrix if method.needs_objects else self.context.scene_matrix
        return list(matrix.video_ids)

    def predictions_for(self, method: Method,
                        action_ids: Optional[Sequence[int]] = None,
                        video_ids: Optional[Sequence[str]] = None,
                        threads: Optional[int] = None,
                        **selection) -> List[Prediction]:
        _, predictions = self.classification.classify(
            method, action_ids=action_ids, video_ids=video_ids, threads=threads, **selection)
        return predictions

    def method_accuracy(self, method: Method, **selection) -> float:
        """全部动作、全部视频上的准确率"""
        return accuracy(self.predictions_for(method, **selection), self.context.truth)

    def accuracies_by_method(self, methods: Sequence[Method]) -> Dict[str, float]:
        """多种方法在全量数据上的准确率"""
        return {m.value: self.method_accuracy(m) for m in methods}

    def subset_evaluator(self, methods: Sequence[Method]):
        """构造随机子集试验使用的评估函数

        子集中的视频为真实动作属于该子集的视频，顺序与概率矩阵一致；
        没有视频时各方法的准确率为None。
        """
        truth: GroundTruth = self.context.truth
        videos = {m: self._primary_video_ids(m) for m in methods}
        for ids in videos.values():
            for video_id in ids:
                truth.action_of(video_id)

        def evaluate(subset: np.ndarray) -> Dict[str, Optional[float]]:
            wanted = set(int(a) for a in subset)
            outcome: Dict[str, Optional[float]] = {}
            for method in methods:
                chosen = [v for v in videos[method] if truth.action_of(v) in wanted]
                if not chosen:
                    outcome[method.value] = None
                    continue
                predictions = self.predictions_for(
                    method, action_ids=subset, video_ids=chosen, threads=1)
                outcome[method.value] = accuracy(predictions, truth)
            return outcome

        return evaluate

    def run_trials(self, methods: Sequence[Method], subset_size: int) -> Dict[str, TrialReport]:
        """同一组随机子集上运行多种方法（配对比较）"""
        self.classification.warm_up(methods)
        return run_subset_trials(
            self.subset_evaluator(methods),
            [m.value for m in methods],
            num_actions=len(self.context.action_vocab),
            subset_size=subset_size,
            num_trials=self.config.num_trials,
            seed=self.config.seed,
            threads=self.context.threads,
        )

    # ------------------------------------------------------------------
    # 命令
    # ------------------------------------------------------------------

    def evaluate(self) -> Dict[str, object]:
        """evaluate命令"""
        method = self.config.resolved_method
        baseline = Method(self.config.compare_method)
        truth = self.context.truth

        predictions = self.predictions_for(method)
        baseline_predictions = self.predictions_for(baseline)
        acc = accuracy(predictions, truth)
        baseline_acc = accuracy(baseline_predictions, truth)
        deltas = per_action_delta(predictions, baseline_predictions, truth)

        output_dir = self._output_dir()
        write_delta_csv(os.path.join(output_dir, "per_action_delta.csv"), deltas)
        report: Dict[str, object] = {
            'command': 'evaluate',
            'method': method.value,
            'compare_method': baseline.value,
            'accuracy': {method.value: acc, baseline.value: baseline_acc},
            'num_videos': len(predictions),
            'per_action_delta': [d.to_dict() for d in deltas],
            'config': self.config.to_dict(),
        }
        if self.config.subset_size is not None:
            methods = [method] if baseline is method else [method, baseline]
            reports = self.run_trials(methods, self.config.subset_size)
            write_trial_summary_csv(os.path.join(output_dir, "trials.csv"), list(reports.values()))
            report['trials'] = {name: r.to_dict() for name, r in reports.items()}
        write_json_report(os.path.join(output_dir, "evaluation_report.json"), report)
        logger.info(f"✅ 准确率 {method.value}={acc:.4f}, {baseline.value}={baseline_acc:.4f}")
        return report

    def ablate(self, methods: Sequence[Method] = ABLATION_METHODS) -> Dict[str, object]:
        """ablate命令：方法 × 子集大小 的准确率均值与标准差"""
        sizes = list(self.config.ablation_subset_sizes) or [len(self.context.action_vocab)]
        reports: List[TrialReport] = []
        for size in sizes:
            logger.info(f"消融实验: 子集大小 {size}")
            reports.extend(self.run_trials(methods, size).values())

        output_dir = self._output_dir()
        write_trial_summary_csv(os.path.join(output_dir, "ablation.csv"), reports)
        report = {
            'command': 'ablate',
            'methods': [m.value for m in methods],
            'subset_sizes': sizes,
            'results': [r.to_dict() for r in reports],
            'config': self.config.to_dict(),
        }
        write_json_report(os.path.join(output_dir, "ablation_report.json"), report)
        return report

    def sweep(self) -> Dict[str, object]:
        """sweep命令：组合方法在 λ × k 网格上的准确率"""
        method = self.config.resolved_method
        if not method.uses_compositions:
            method = Method.COMPOSITIONS

        def evaluate(mmr_lambda: float, k: int) -> float:
            return self.method_accuracy(method, k=k, mmr_lambda=mmr_lambda)

        points: List[SweepPoint] = sweep_lambda(evaluate, self.config.sweep_lambdas,
                                                self.config.sweep_ks)
        output_dir = self._output_dir()
        write_sweep_csv(os.path.join(output_dir, "sweep.csv"), points)
        report = {
            'command': 'sweep',
            'method': method.value,
            'points': [p.to_dict() for p in points],
            'config': self.config.to_dict(),
        }
        write_json_report(os.path.join(output_dir, "sweep_report.json"), report)
        return report

    def _output_dir(self) -> str:
        os.makedirs(self.config.output_dir, exist_ok=True)
        return self.config.output_dir
