"""
主引擎与朴素参考实现的一致性测试
"""
import unittest

import numpy as np

from tests.fixtures import random_instance
from zscomp.domain.composition import CompositionSpace
from zscomp.domain.embedding.table import EmbeddingTable
from zscomp.domain.embedding.vocabulary import Vocabulary
from zscomp.domain.exceptions import SizeGuardError
from zscomp.domain.inference import ActionSupport, Method, classify_batch
from zscomp.domain.selection import FULL_POOL, SelectionConfig, SelectionMode, select_all_actions
from zscomp.verification import SIZE_LIMIT, NaiveCompositionOracle, OracleConfig, oracle_pipeline


def _engine(instance, config: OracleConfig):
    space = CompositionSpace(instance.objects, instance.scenes,
                             normalize_before_sum=config.normalize_before_sum,
                             exclude_self_pairs=config.exclude_self_pairs)
    selection = SelectionConfig(k=config.k, mmr_lambda=config.mmr_lambda,
                                pool_size=config.pool_size, mode=SelectionMode(config.mode),
                                weight_in_selection=config.weight_in_selection)
    sets = select_all_actions(space, instance.actions, selection)
    method = Method.COMPOSITIONS_WEIGHTED_SCORING if config.weight_in_scoring else Method.COMPOSITIONS
    supports = [ActionSupport(s.action_id, compositions=s) for s in sets]
    scores, predictions = classify_batch(instance.object_probs, instance.scene_probs, supports,
                                         method, clip=config.clip_similarities)
    return sets, scores, predictions


def _table(labels, vectors):
    return EmbeddingTable(Vocabulary.create(labels), np.asarray(vectors, dtype=np.float64))


class TestOracleEquivalence(unittest.TestCase):
    """随机实例上的一致性"""

    def assert_equivalent(self, instance, config):
        sets, scores, predictions = _engine(instance, config)
        expected = oracle_pipeline(instance.objects, instance.scenes, instance.actions,
                                   instance.object_probs.values, instance.scene_probs.values, config)
        for comp_set in sets:
            self.assertEqual(
                [ref.as_tuple() for ref in comp_set.refs],
                [(m.object_id, m.scene_id) for m in expected.selections[comp_set.action_id]])
        np.testing.assert_allclose(scores.scores, expected.scores, rtol=1e-9, atol=1e-12)
        self.assertEqual([p.action_id for p in predictions], expected.predictions)

    def test_mmr_lambdas(self):
        """不同λ下的MMR选择与打分一致"""
        sizes = np.random.default_rng(2024)
        for seed in range(20):
            n_objects, n_scenes = int(sizes.integers(3, 13)), int(sizes.integers(3, 11))
            instance = random_instance(seed=seed, n_objects=n_objects, n_scenes=n_scenes,
                                       n_actions=int(sizes.integers(2, 7)),
                                       n_videos=int(sizes.integers(5, 31)),
                                       d=int(sizes.integers(4, 17)))
            for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
                with self.subTest(seed=seed, mmr_lambda=lam):
                    self.assert_equivalent(
                        instance, OracleConfig(k=5, mmr_lambda=lam, pool_size=FULL_POOL))

    def test_plain(self):
        """普通top-k一致"""
        instance = random_instance(seed=4, n_objects=9, n_scenes=5, n_actions=3, n_videos=8, d=5)
        self.assert_equivalent(instance, OracleConfig(k=7, mode="plain"))

    def test_options(self):
        """权重、截断、归一化与自组合排除选项下一致"""
        instance = random_instance(seed=6, n_objects=6, n_scenes=6, n_actions=3, n_videos=8, d=4)
        configs = [
            OracleConfig(k=4, mmr_lambda=0.5, weight_in_scoring=True),
            OracleConfig(k=4, mmr_lambda=0.5, weight_in_selection=True),
            OracleConfig(k=4, mmr_lambda=0.75, clip_similarities=True),
            OracleConfig(k=4, mmr_lambda=0.75, normalize_before_sum=True),
            OracleConfig(k=4, mmr_lambda=0.25, exclude_self_pairs=True),
            OracleConfig(k=4, mode="plain", pool_size=None, exclude_self_pairs=True),
        ]
        for config in configs:
            with self.subTest(config=config):
                self.assert_equivalent(instance, config)


class TestHandComputed(unittest.TestCase):
    """2×2 手算实例"""

    def setUp(self):
        self.objects = _table(["o0", "o1"], [[1.0, 0.0], [0.0, 1.0]])
        self.scenes = _table(["s0", "s1"], [[1.0, 0.0], [0.0, 1.0]])
        self.actions = _table(["a0"], [[1.0, 0.0]])

    def test_plain_tie_break(self):
        """同分组合按 (object_id, scene_id) 字典序"""
        oracle = NaiveCompositionOracle(self.objects, self.scenes, OracleConfig(k=2, mode="plain"))
        members = oracle.select(self.actions.vectors[0])
        self.assertEqual([(m.object_id, m.scene_id) for m in members], [(0, 0), (0, 1)])
        self.assertAlmostEqual(members[1].similarity, 1.0 / np.sqrt(2.0))

    def test_mmr_prefers_diverse(self):
        """λ较小时第二个组合选与第一个正交的组合"""
        oracle = NaiveCompositionOracle(self.objects, self.scenes,
                                        OracleConfig(k=2, mmr_lambda=0.25))
        members = oracle.select(self.actions.vectors[0])
        self.assertEqual([(m.object_id, m.scene_id) for m in members], [(0, 0), (1, 1)])
        space = CompositionSpace(self.objects, self.scenes)
        sets = select_all_actions(space, self.actions,
                                  SelectionConfig(k=2, mmr_lambda=0.25, pool_size=FULL_POOL))
        self.assertEqual([ref.as_tuple() for ref in sets[0].refs], [(0, 0), (1, 1)])

    def test_score(self):
        """均匀概率下的分数"""
        oracle = NaiveCompositionOracle(self.objects, self.scenes, OracleConfig(k=2, mode="plain"))
        members = oracle.select(self.actions.vectors[0])
        score = oracle.score(np.array([[0.5, 0.5]]), np.array([[0.5, 0.5]]), members)
        self.assertAlmostEqual(float(score[0]), 0.25 + 0.25 / np.sqrt(2.0))


class TestSizeGuard(unittest.TestCase):
    """规模上限测试"""

    def test_rejects_large_space(self):
        """组合数超过上限时拒绝"""
        rng = np.random.default_rng(0)
        objects = _table([f"o{i}" for i in range(400)], rng.normal(size=(400, 2)))
        scenes = _table([f"s{i}" for i in range(300)], rng.normal(size=(300, 2)))
        with self.assertRaises(SizeGuardError) as ctx:
            NaiveCompositionOracle(objects, scenes, OracleConfig())
        self.assertEqual(ctx.exception.limit, SIZE_LIMIT)
        self.assertEqual(ctx.exception.size, 120000)


if __name__ == '__main__':
    unittest.main()
