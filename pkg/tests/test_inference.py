"""
动作打分与预测测试
"""
import unittest

import numpy as np

from tests.fixtures import make_vocab, random_instance
from zscomp.domain.composition import CompositionRef, CompositionSpace
from zscomp.domain.exceptions import ArgumentError, LookupFailedError, SchemaError
from zscomp.domain.inference import (
    ActionSupport, Method, ScoreMatrix, WeightMode, classify_batch, predict, predict_all,
    score_action, score_concatenation, score_late_fusion, score_single_source,
)
from zscomp.domain.probability import ProbabilityMatrix
from zscomp.domain.selection import (
    ActionCompositionSet, SelectedComposition, SelectionConfig, select_all_actions,
    select_top_k_single,
)


def _comp_set(action_id, members):
    return ActionCompositionSet(
        action_id,
        tuple(SelectedComposition(CompositionRef(o, s), sim, sim, w) for o, s, sim, w in members),
        SelectionConfig(k=max(1, len(members))),
    )


class TestScorer(unittest.TestCase):
    """打分器测试"""

    def setUp(self):
        self.objects_row = np.array([0.5, 0.3, 0.2])
        self.scenes_row = np.array([0.6, 0.4])

    def test_hand_computed_score(self):
        """手算的组合分数"""
        comp_set = _comp_set(0, [(0, 0, 0.9, 0.5), (2, 1, -0.4, 1.0)])
        expected = 0.5 * 0.6 * 0.9 + 0.2 * 0.4 * -0.4
        self.assertAlmostEqual(score_action(self.objects_row, self.scenes_row, comp_set), expected)

    def test_clip_negative(self):
        """截断时负相似度贡献为0"""
        comp_set = _comp_set(0, [(0, 0, 0.9, 0.5), (2, 1, -0.4, 1.0)])
        self.assertAlmostEqual(
            score_action(self.objects_row, self.scenes_row, comp_set, clip=True), 0.5 * 0.6 * 0.9)

    def test_weight_in_scoring(self):
        """权重参与打分时乘以组合权重"""
        comp_set = _comp_set(0, [(1, 0, 0.8, 0.25)])
        self.assertAlmostEqual(
            score_action(self.objects_row, self.scenes_row, comp_set, WeightMode.IN_SCORING),
            0.3 * 0.6 * 0.8 * 0.25)

    def test_empty_set(self):
        """空组合集合为参数错误"""
        empty = ActionCompositionSet(0, (), SelectionConfig(k=1))
        with self.assertRaises(ArgumentError):
            score_action(self.objects_row, self.scenes_row, empty)

    def test_ids_beyond_columns(self):
        """组合id超出概率行为结构错误"""
        with self.assertRaises(SchemaError):
            score_action(self.objects_row, self.scenes_row, _comp_set(0, [(5, 0, 0.1, 1.0)]))

    def test_concatenation_offset(self):
        """拼接基线中场景id偏移物体个数"""
        ranked = [(0, 0.5), (4, 0.25)]
        self.assertAlmostEqual(
            score_concatenation(self.objects_row, self.scenes_row, ranked), 0.5 * 0.5 + 0.4 * 0.25)

    def test_single_source_and_fusion(self):
        """单一来源打分与后期融合"""
        object_score = score_single_source(self.objects_row, [(1, 0.5)])
        scene_score = score_single_source(self.scenes_row, [(0, 1.0)])
        self.assertAlmostEqual(object_score, 0.15)
        self.assertAlmostEqual(score_late_fusion(object_score, scene_score), (0.15 + 0.6) / 2)

    def test_argmax_tie_prefers_first_action(self):
        """同分时预测最小的动作下标"""
        scores = ScoreMatrix(["v"], [0, 1, 2], np.array([[0.2, 0.7, 0.7]]), Method.COMPOSITIONS)
        self.assertEqual(predict(scores, "v").action_id, 1)
        self.assertEqual(predict_all(scores)[0].action_id, 1)

    def test_method_resolve(self):
        """compositions 与权重位置合并为具体方法"""
        self.assertIs(Method.resolve(Method.COMPOSITIONS, WeightMode.IN_SCORING),
                      Method.COMPOSITIONS_WEIGHTED_SCORING)
        self.assertIs(Method.resolve(Method.OBJECT_ONLY, WeightMode.IN_SELECTION), Method.OBJECT_ONLY)


class TestClassifyBatch(unittest.TestCase):
    """批量分类测试"""

    def setUp(self):
        self.instance = random_instance(seed=5, n_objects=7, n_scenes=5, n_actions=4, n_videos=12, d=6)
        space = CompositionSpace(self.instance.objects, self.instance.scenes)
        sets = select_all_actions(space, self.instance.actions, SelectionConfig(k=4, mmr_lambda=0.5))
        self.supports = []
        for a, comp_set in enumerate(sets):
            phi_a = self.instance.actions.vectors[a]
            self.supports.append(ActionSupport(
                a,
                compositions=comp_set,
                objects=select_top_k_single(self.instance.objects, self.instance.objects.vocab, phi_a, 3),
                scenes=select_top_k_single(self.instance.scenes, self.instance.scenes.vocab, phi_a, 2),
            ))

    def test_matches_per_video_scoring(self):
        """批量分数与逐视频打分一致"""
        matrix, predictions = classify_batch(self.instance.object_probs, self.instance.scene_probs,
                                             self.supports, Method.COMPOSITIONS)
        for video_id in matrix.video_ids[:4]:
            for a, support in enumerate(self.supports):
                expected = score_action(self.instance.object_probs.row(video_id),
                                        self.instance.scene_probs.row(video_id),
                                        support.compositions)
                self.assertAlmostEqual(float(matrix.row(video_id)[a]), expected, places=12)
        self.assertEqual(len(predictions), 12)

    def test_thread_invariance(self):
        """多线程结果与单线程逐位一致"""
        single, _ = classify_batch(self.instance.object_probs, self.instance.scene_probs,
                                   self.supports, Method.LATE_FUSION, threads=1)
        multi, _ = classify_batch(self.instance.object_probs, self.instance.scene_probs,
                                  self.supports, Method.LATE_FUSION, threads=3)
        np.testing.assert_array_equal(single.scores, multi.scores)

    def test_object_only_ignores_scenes(self):
        """物体基线不依赖场景概率"""
        baseline, _ = classify_batch(self.instance.object_probs, self.instance.scene_probs,
                                     self.supports, Method.OBJECT_ONLY)
        other = ProbabilityMatrix(self.instance.scene_probs.video_ids, self.instance.scenes.vocab,
                                  np.full(self.instance.scene_probs.shape, 0.2))
        changed, _ = classify_batch(self.instance.object_probs, other, self.supports, Method.OBJECT_ONLY)
        np.testing.assert_array_equal(baseline.scores, changed.scores)
        alone, _ = classify_batch(self.instance.object_probs, None, self.supports, Method.OBJECT_ONLY)
        np.testing.assert_array_equal(baseline.scores, alone.scores)

    def test_scene_only_ignores_objects(self):
        """场景基线不依赖物体概率，预测逐位一致"""
        baseline, expected = classify_batch(self.instance.object_probs, self.instance.scene_probs,
                                            self.supports, Method.SCENE_ONLY)
        other = ProbabilityMatrix(self.instance.object_probs.video_ids, self.instance.objects.vocab,
                                  np.full(self.instance.object_probs.shape, 1.0 / 7))
        changed, predictions = classify_batch(other, self.instance.scene_probs,
                                              self.supports, Method.SCENE_ONLY)
        np.testing.assert_array_equal(baseline.scores, changed.scores)
        self.assertEqual([p.action_id for p in expected], [p.action_id for p in predictions])
        alone, _ = classify_batch(None, self.instance.scene_probs, self.supports, Method.SCENE_ONLY)
        np.testing.assert_array_equal(baseline.scores, alone.scores)

    def test_scene_matrix_aligned_by_id(self):
        """场景矩阵按视频id对齐而非按行号"""
        reversed_ids = list(reversed(self.instance.scene_probs.video_ids))
        shuffled = self.instance.scene_probs.restrict(reversed_ids)
        expected, _ = classify_batch(self.instance.object_probs, self.instance.scene_probs,
                                     self.supports, Method.COMPOSITIONS)
        actual, _ = classify_batch(self.instance.object_probs, shuffled,
                                   self.supports, Method.COMPOSITIONS)
        np.testing.assert_allclose(actual.scores, expected.scores, rtol=0, atol=1e-15)

    def test_missing_video_in_scenes(self):
        """场景矩阵缺少视频时报告视频id"""
        partial = self.instance.scene_probs.restrict(self.instance.scene_probs.video_ids[1:])
        with self.assertRaises(LookupFailedError) as ctx:
            classify_batch(self.instance.object_probs, partial, self.supports, Method.COMPOSITIONS)
        self.assertEqual(ctx.exception.identifier, self.instance.object_probs.video_ids[0])

    def test_missing_inputs(self):
        """缺少方法所需的矩阵或支撑集合为参数错误"""
        with self.assertRaises(ArgumentError):
            classify_batch(self.instance.object_probs, None, self.supports, Method.COMPOSITIONS)
        with self.assertRaises(ArgumentError):
            classify_batch(self.instance.object_probs, self.instance.scene_probs,
                           self.supports, Method.CONCATENATION)

    def test_single_video_matrix(self):
        """单个视频也能分类"""
        vocab = make_vocab("obj", 7)
        objects = ProbabilityMatrix(["only"], vocab, np.full((1, 7), 1.0 / 7))
        scenes = self.instance.scene_probs.restrict([self.instance.scene_probs.video_ids[0]])
        scenes = ProbabilityMatrix(["only"], scenes.vocab, scenes.values)
        matrix, predictions = classify_batch(objects, scenes, self.supports, Method.COMPOSITIONS)
        self.assertEqual(matrix.shape, (1, 4))
        self.assertEqual(predictions[0].video_id, "only")


if __name__ == '__main__':
    unittest.main()
