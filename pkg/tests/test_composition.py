"""
组合空间测试
"""
import os
import tempfile
import unittest

import numpy as np

from tests.fixtures import naive_cosine, random_instance
from zscomp.domain.composition import CompositionRef, CompositionSpace
from zscomp.domain.embedding.table import EmbeddingTable
from zscomp.domain.embedding.vocabulary import Vocabulary
from zscomp.domain.exceptions import ArgumentError, InternalError
from zscomp.domain.selection import select_top_k_plain


def _table(labels, vectors):
    return EmbeddingTable(Vocabulary.create(labels), np.asarray(vectors, dtype=np.float64))


class TestCompositionSpace(unittest.TestCase):
    """组合相似度分解测试"""

    def setUp(self):
        self.instance = random_instance(seed=7, n_objects=6, n_scenes=5, n_actions=3, d=8)
        self.space = CompositionSpace(self.instance.objects, self.instance.scenes)

    def test_embedding_is_sum(self):
        """组合表示为两个原始向量之和"""
        c = CompositionRef(2, 3)
        np.testing.assert_allclose(
            self.space.composition_embedding(c),
            self.instance.objects.vectors[2] + self.instance.scenes.vectors[3])

    def test_pair_norm(self):
        """组合范数与直接计算一致"""
        expected = np.linalg.norm(self.instance.objects.vectors[:, None, :]
                                  + self.instance.scenes.vectors[None, :, :], axis=2)
        np.testing.assert_allclose(self.space.pair_norms, expected, rtol=1e-10)

    def test_action_similarity_matches_direct_cosine(self):
        """分解形式的组合-动作相似度等于直接余弦"""
        phi_a = self.instance.actions.vectors[1]
        for o in range(6):
            for s in range(5):
                c = CompositionRef(o, s)
                expected = naive_cosine(self.space.composition_embedding(c), phi_a)
                self.assertAlmostEqual(
                    self.space.composition_action_similarity(c, phi_a), expected, places=10)

    def test_scaled_action_keeps_ranking(self):
        """动作向量乘以正数后top-k组合不变"""
        phi_a = self.instance.actions.vectors[2]
        base = select_top_k_plain(self.space, phi_a, 10)
        for alpha in (1e-3, 0.5, 7.0, 1e4):
            scaled = select_top_k_plain(self.space, alpha * phi_a, 10)
            self.assertEqual(scaled.ref_set(), base.ref_set())

    def test_blocks_match_single_similarity(self):
        """流式分块结果与逐个计算一致"""
        phi_a = self.instance.actions.vectors[0]
        for start, block in self.space.iter_similarity_blocks(phi_a):
            for r, row in enumerate(block):
                for s, value in enumerate(row):
                    c = CompositionRef(start + r, s)
                    self.assertAlmostEqual(
                        value, self.space.composition_action_similarity(c, phi_a), places=10)

    def test_pair_similarity_matches_direct_cosine(self):
        """组合间相似度等于直接余弦，且自身相似度为1"""
        c1, c2 = CompositionRef(0, 1), CompositionRef(4, 2)
        expected = naive_cosine(self.space.composition_embedding(c1),
                                self.space.composition_embedding(c2))
        self.assertAlmostEqual(self.space.composition_pair_similarity(c1, c2), expected, places=10)
        self.assertEqual(self.space.composition_pair_similarity(c1, c1), 1.0)

    def test_pool_similarities(self):
        """候选池批量相似度与逐对计算一致"""
        objects, scenes = [0, 1, 1, 5], [0, 2, 4, 4]
        pool = self.space.pool(objects, scenes)
        sims = pool.similarities_to(1)
        for i, (o, s) in enumerate(zip(objects, scenes)):
            expected = self.space.composition_pair_similarity(CompositionRef(1, 2), CompositionRef(o, s))
            self.assertAlmostEqual(float(sims[i]), expected, places=10)

    def test_weight(self):
        """组合权重为物体与场景向量的余弦"""
        c = CompositionRef(3, 1)
        expected = naive_cosine(self.instance.objects.vectors[3], self.instance.scenes.vectors[1])
        self.assertAlmostEqual(self.space.composition_weight(c), expected, places=10)
        np.testing.assert_allclose(self.space.weights_for(np.array([3]), np.array([1])), [expected])

    def test_score_all_compositions_order(self):
        """全空间打分按行优先顺序推送"""
        seen = []
        count = self.space.score_all_compositions(
            self.instance.actions.vectors[2], lambda ref, value: seen.append(ref.as_tuple()))
        self.assertEqual(count, 30)
        self.assertEqual(seen, [(o, s) for o in range(6) for s in range(5)])

    def test_action_dimension_mismatch(self):
        """动作向量维度不一致为内部错误"""
        with self.assertRaises(InternalError):
            self.space.composition_action_similarity(CompositionRef(0, 0), np.ones(3))

    def test_out_of_range_ref(self):
        """越界组合为参数错误"""
        with self.assertRaises(ArgumentError):
            self.space.pair_norm(CompositionRef(6, 0))


class TestCompositionEdgeCases(unittest.TestCase):
    """组合空间边界情况测试"""

    def test_cancelling_pair_is_zero(self):
        """物体与场景向量相互抵消时相似度为0并计数"""
        objects = _table(["a"], [[1.0, 0.0]])
        scenes = _table(["b", "c"], [[-1.0, 0.0], [0.0, 1.0]])
        space = CompositionSpace(objects, scenes)
        value = space.composition_action_similarity(CompositionRef(0, 0), np.array([1.0, 1.0]))
        self.assertEqual(value, 0.0)
        self.assertEqual(space.degeneracy.count, 1)

    def test_self_pairs_excluded(self):
        """排除自组合时对角线不出现在打分中"""
        vectors = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]
        table = _table(["x", "y", "z"], vectors)
        space = CompositionSpace(table, table, exclude_self_pairs=True)
        refs = [ref.as_tuple() for ref, _ in space.iter_scores(np.array([1.0, 0.0]))]
        self.assertEqual(len(refs), 6)
        self.assertTrue(all(o != s for o, s in refs))

    def test_normalize_before_sum(self):
        """求和前归一化时组合表示为单位向量之和"""
        objects = _table(["a"], [[3.0, 0.0]])
        scenes = _table(["b"], [[0.0, 0.5]])
        space = CompositionSpace(objects, scenes, normalize_before_sum=True)
        np.testing.assert_allclose(space.composition_embedding(CompositionRef(0, 0)), [1.0, 1.0])
        self.assertAlmostEqual(space.pair_norm(CompositionRef(0, 0)), np.sqrt(2.0))

    def test_dimension_mismatch(self):
        """两个向量表维度不一致为参数错误"""
        with self.assertRaises(ArgumentError):
            CompositionSpace(_table(["a"], [[1.0, 0.0]]), _table(["b"], [[1.0, 0.0, 0.0]]))

    def test_cache_round_trip(self):
        """缓存写出后可被同尺寸空间读回"""
        instance = random_instance(seed=3, n_objects=4, n_scenes=3, d=5)
        space = CompositionSpace(instance.objects, instance.scenes)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "space.zspc")
            space.save_cache(path)
            fresh = CompositionSpace(instance.objects, instance.scenes)
            fresh.load_cache(path)
            np.testing.assert_allclose(fresh.pair_norms, space.pair_norms, rtol=1e-6)
            np.testing.assert_allclose(fresh.cross_dots, space.cross_dots, rtol=1e-5, atol=1e-6)

            other = CompositionSpace(instance.objects.subset([0, 1]), instance.scenes)
            with self.assertRaises(InternalError):
                other.load_cache(path)

    def test_cache_rejects_other_normalization(self):
        """求和前归一化设置不同的缓存被拒绝"""
        instance = random_instance(seed=4, n_objects=4, n_scenes=3, d=5)
        with tempfile.TemporaryDirectory() as tmp:
            raw_path = os.path.join(tmp, "raw.zspc")
            normalized_path = os.path.join(tmp, "normalized.zspc")
            CompositionSpace(instance.objects, instance.scenes).save_cache(raw_path)
            CompositionSpace(instance.objects, instance.scenes,
                             normalize_before_sum=True).save_cache(normalized_path)

            with self.assertRaises(InternalError):
                CompositionSpace(instance.objects, instance.scenes,
                                 normalize_before_sum=True).load_cache(raw_path)
            with self.assertRaises(InternalError):
                CompositionSpace(instance.objects, instance.scenes).load_cache(normalized_path)
            normalized = CompositionSpace(instance.objects, instance.scenes, normalize_before_sum=True)
            normalized.load_cache(normalized_path)
            self.assertEqual(normalized.pair_norms.shape, (4, 3))


class TestDecompositionIdentity(unittest.TestCase):
    """分解计算与直接构造组合向量的一致性（10000个组合）"""

    def _space(self, d, seed):
        rng = np.random.default_rng(seed)
        objects = _table([f"o{i}" for i in range(100)], rng.normal(size=(100, d)))
        scenes = _table([f"s{i}" for i in range(100)], rng.normal(size=(100, d)))
        return CompositionSpace(objects, scenes), rng.normal(size=d)

    def test_action_similarity_identity(self):
        """d∈{2,50,300}时分解相似度与直接余弦相差不超过1e-5"""
        for d in (2, 50, 300):
            with self.subTest(d=d):
                space, phi_a = self._space(d, seed=d)
                composed = (space.object_table.vectors[:, None, :]
                            + space.scene_table.vectors[None, :, :])
                expected = (composed @ phi_a) / (np.linalg.norm(composed, axis=2)
                                                 * np.linalg.norm(phi_a))
                actual = np.vstack([block for _, block in space.iter_similarity_blocks(phi_a)])
                self.assertEqual(actual.shape, (100, 100))
                np.testing.assert_allclose(actual, expected, rtol=0, atol=1e-5)

    def test_pair_norm_identity(self):
        """组合范数平方等于两范数平方和加两倍交叉点积"""
        for d in (2, 50, 300):
            with self.subTest(d=d):
                space, _ = self._space(d, seed=1000 + d)
                object_sq = np.sum(space.object_table.vectors ** 2, axis=1)
                scene_sq = np.sum(space.scene_table.vectors ** 2, axis=1)
                expected = object_sq[:, None] + scene_sq[None, :] + 2.0 * space.cross_dots
                np.testing.assert_allclose(space.pair_norms ** 2, expected, rtol=1e-4)

    def test_pair_norm_identity_after_cache_load(self):
        """f32缓存读回后恒等式仍在1e-4相对误差内成立"""
        space, _ = self._space(50, seed=7)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "space.zspc")
            space.save_cache(path)
            loaded = CompositionSpace(space.object_table, space.scene_table)
            loaded.load_cache(path)
        object_sq = np.sum(space.object_table.vectors ** 2, axis=1)
        scene_sq = np.sum(space.scene_table.vectors ** 2, axis=1)
        expected = object_sq[:, None] + scene_sq[None, :] + 2.0 * space.cross_dots
        np.testing.assert_allclose(loaded.pair_norms ** 2, expected, rtol=1e-4)


if __name__ == '__main__':
    unittest.main()
