"""
应用层 - 主引擎与参考实现的等价性检查
"""
import logging
import os
from typing import Dict, List, Optional

import numpy as np

from ...domain.inference.scores import Method
from ...infrastructure.exporters.json_report import write_json_report
from ...verification.oracle import OracleConfig, oracle_pipeline
from .classification_service import ClassificationAppService
from .experiment_context import ExperimentContext

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-5


class OracleCheckService:
    """oracle-check命令"""

    def __init__(self, context: ExperimentContext,
                 classification: Optional[ClassificationAppService] = None,
                 tolerance: float = DEFAULT_TOLERANCE):
        self.context = context
        self.config = context.config
        self.classification = classification or ClassificationAppService(context)
        self.tolerance = tolerance

    def oracle_config(self, method: Method) -> OracleConfig:
        cfg = self.config
        return OracleConfig(
            k=cfg.k_composition,
            mmr_lambda=cfg.mmr_lambda,
            mode=cfg.selection_mode,
            pool_size=cfg.pool_size,
            weight_in_selection=method is Method.COMPOSITIONS_WEIGHTED_SELECTION,
            weight_in_scoring=method is Method.COMPOSITIONS_WEIGHTED_SCORING,
            clip_similarities=cfg.clip_similarities,
            normalize_before_sum=cfg.normalize_before_sum,
            exclude_self_pairs=cfg.exclude_self_pairs,
        )

    def run(self, write_report: bool = True) -> Dict[str, object]:
        """比较组合集合、分数矩阵与预测

        Returns:
            报告，passed 表示全部一致
        """
        method = self.config.resolved_method
        if not method.uses_compositions:
            method = Method.COMPOSITIONS
        ctx = self.context
        scores, predictions = self.classification.classify(method)
        objects = ctx.object_matrix.aligned_to(scores.video_ids)
        scenes = ctx.scene_matrix.aligned_to(scores.video_ids)
        expected = oracle_pipeline(ctx.object_table, ctx.scene_table, ctx.action_table,
                                   objects, scenes, self.oracle_config(method))

        mismatches: List[str] = []
        for comp_set in self.classification.composition_sets(method):
            a = comp_set.action_id
            if set(r.as_tuple() for r in comp_set.refs) != expected.selected_set(a):
                mismatches.append(f"动作 {ctx.action_vocab.label_of(a)} 的组合集合不一致")

        diff = np.abs(scores.scores - expected.scores)
        bound = self.tolerance * np.maximum(1.0, np.abs(expected.scores))
        bad = np.argwhere(diff > bound)
        for r, c in bad[:10]:
            mismatches.append(
                f"视频 {scores.video_ids[r]} 动作 {ctx.action_vocab.label_of(scores.action_ids[c])} "
                f"分数 {scores.scores[r, c]:.8g} ≠ {expected.scores[r, c]:.8g}")

        engine_predictions = [p.action_id for p in predictions]
        for video_id, got, want in zip(scores.video_ids, engine_predictions, expected.predictions):
            if got != want:
                mismatches.append(f"视频 {video_id} 的预测不一致: {got} vs {want}")

        report = {
            'command': 'oracle-check',
            'method': method.value,
            'passed': not mismatches,
            'tolerance': self.tolerance,
            'max_abs_score_diff': float(diff.max()) if diff.size else 0.0,
            'num_score_mismatches': int(len(bad)),
            'mismatches': mismatches,
            'config': self.config.to_dict(),
        }
        if write_report:
            os.makedirs(self.config.output_dir, exist_ok=True)
            write_json_report(os.path.join(self.config.output_dir, "oracle_check.json"), report)
        if mismatches:
            logger.warning(f"参考实现检查未通过: {len(mismatches)} 处不一致")
        else:
            logger.info("✅ 参考实现检查通过")
        return report
