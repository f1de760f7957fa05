"""
词表、向量表加载与余弦相似度测试
"""
import os
import tempfile
import unittest

import numpy as np

from zscomp.domain.embedding import (
    BinaryTableLoader, DegeneracyCounter, EmbeddingTable, OOVPolicy, RawTable,
    SourceKind, TableLoaderFactory, Vocabulary, Word2VecTextLoader, cosine,
    embed_label, load_embedding_table, tokenize, write_binary_table, write_word2vec_text,
)
from zscomp.domain.exceptions import (
    ArgumentError, DataError, FormatError, LookupFailedError, MissingLabelError,
)


class TestVocabulary(unittest.TestCase):
    """词表测试"""

    def test_ids_are_contiguous(self):
        """id为0起始的连续下标"""
        vocab = Vocabulary.create(["dog", " horse ", "cat"], SourceKind.OBJECTS)
        self.assertEqual(vocab.labels, ("dog", "horse", "cat"))
        self.assertEqual(vocab.id_of("horse"), 1)
        self.assertEqual(vocab.label_of(2), "cat")
        self.assertIn("dog", vocab)

    def test_duplicate_after_trim_rejected(self):
        """去空白后重复的标签被拒绝"""
        with self.assertRaises(ArgumentError):
            Vocabulary.create(["dog", "dog "])

    def test_case_sensitive(self):
        """大小写不同视为不同标签"""
        vocab = Vocabulary.create(["Dog", "dog"])
        self.assertEqual(len(vocab), 2)

    def test_unknown_label_lookup(self):
        """查找不存在的标签抛出 LookupFailedError"""
        vocab = Vocabulary.create(["dog"])
        with self.assertRaises(LookupFailedError):
            vocab.id_of("cat")
        with self.assertRaises(KeyError):
            vocab.id_of("cat")

    def test_from_file_skips_comments(self):
        """词表文件忽略注释行与空行"""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "vocab.txt")
            with open(path, "w", encoding="utf-8") as f:
                f.write("# header\nhorse racing\n\n跳舞\n")
            vocab = Vocabulary.from_file(path, SourceKind.ACTIONS)
        self.assertEqual(vocab.labels, ("horse racing", "跳舞"))
        self.assertEqual(vocab.source_kind, SourceKind.ACTIONS)


class TestEmbedLabel(unittest.TestCase):
    """标签向量测试"""

    def setUp(self):
        self.index = {
            "horse": np.array([1.0, 0.0, 0.0]),
            "racing": np.array([0.0, 1.0, 0.0]),
            "dog": np.array([0.2, 0.4, 0.6]),
        }

    def test_tokenize(self):
        """按空白与下划线切分并去除标点"""
        self.assertEqual(tokenize("Horse_Racing, Fast"), ["horse", "racing", "fast"])

    def test_single_token_is_exact_copy(self):
        """单词标签与词向量逐位相同"""
        vector = embed_label("dog", self.index)
        np.testing.assert_array_equal(vector, self.index["dog"])

    def test_phrase_is_mean(self):
        """多词标签为词向量的算术平均"""
        vector = embed_label("horse racing", self.index)
        np.testing.assert_allclose(vector, [0.5, 0.5, 0.0])

    def test_missing_tokens_skipped(self):
        """缺失的词被跳过"""
        vector = embed_label("horse unicorn", self.index)
        np.testing.assert_array_equal(vector, self.index["horse"])

    def test_fully_missing_fail(self):
        """全部缺失时FAIL策略抛出 MissingLabelError"""
        with self.assertRaises(MissingLabelError) as ctx:
            embed_label("unicorn", self.index)
        self.assertEqual(ctx.exception.label, "unicorn")

    def test_fully_missing_zero(self):
        """全部缺失时ZERO策略返回None"""
        self.assertIsNone(embed_label("unicorn", self.index, OOVPolicy.ZERO, dimension=3))

    def test_empty_label(self):
        """空标签为参数错误"""
        with self.assertRaises(ArgumentError):
            embed_label("  ", self.index)


class TestCosine(unittest.TestCase):
    """余弦相似度测试"""

    def test_values(self):
        """相同、正交与相反向量"""
        self.assertEqual(cosine(np.array([1.0, 0.0]), np.array([1.0, 0.0])), 1.0)
        self.assertEqual(cosine(np.array([1.0, 0.0]), np.array([0.0, 1.0])), 0.0)
        self.assertEqual(cosine(np.array([1.0, 0.0]), np.array([-1.0, 0.0])), -1.0)

    def test_zero_vector_counted(self):
        """零向量返回0并计数"""
        counter = DegeneracyCounter()
        self.assertEqual(cosine(np.zeros(3), np.ones(3), counter), 0.0)
        self.assertEqual(counter.count, 1)

    def test_dimension_mismatch(self):
        """维度不一致为参数错误"""
        with self.assertRaises(ArgumentError):
            cosine(np.ones(2), np.ones(3))

    def test_symmetric_and_scale_invariant(self):
        """余弦对称，且对正数缩放不变"""
        rng = np.random.default_rng(17)
        for _ in range(200):
            u, v = rng.normal(size=(2, 8))
            self.assertAlmostEqual(cosine(u, v), cosine(v, u), delta=1e-9)
            for alpha in (1e-3, 0.3, 12.0, 1e5):
                self.assertAlmostEqual(cosine(alpha * u, v), cosine(u, v), delta=1e-6)


class TestEmbeddingTable(unittest.TestCase):
    """向量表测试"""

    def test_from_raw_exact_then_phrase(self):
        """完全匹配的词直接取行，短语按词平均"""
        raw = RawTable(["horse", "racing", "horse_racing_team"],
                       np.array([[1.0, 0.0], [0.0, 1.0], [3.0, 3.0]]))
        vocab = Vocabulary.create(["horse racing", "horse_racing_team"])
        table = EmbeddingTable.from_raw(raw, vocab)
        np.testing.assert_allclose(table.vector(0), [0.5, 0.5])
        np.testing.assert_array_equal(table.vector(1), [3.0, 3.0])

    def test_zero_policy_marks_oov(self):
        """ZERO策略下全缺失标签为零向量并标记"""
        raw = RawTable(["horse"], np.array([[1.0, 2.0]]))
        vocab = Vocabulary.create(["horse", "unicorn"])
        table = EmbeddingTable.from_raw(raw, vocab, OOVPolicy.ZERO)
        self.assertEqual(table.oov_mask.tolist(), [False, True])
        np.testing.assert_array_equal(table.vector(1), [0.0, 0.0])

    def test_cancelling_phrase_flagged_not_rejected(self):
        """短语中的词向量相互抵消时标记为OOV并告警，而非加载失败"""
        raw = RawTable(["horse", "racing", "dog"],
                       np.array([[1.0, -1.0], [-1.0, 1.0], [0.5, 0.5]]))
        vocab = Vocabulary.create(["horse racing", "dog"])
        with self.assertLogs("zscomp.domain.embedding.table", level="WARNING") as logs:
            table = EmbeddingTable.from_raw(raw, vocab)
        self.assertEqual(table.oov_mask.tolist(), [True, False])
        np.testing.assert_array_equal(table.vector(0), [0.0, 0.0])
        self.assertIn("horse racing", "\n".join(logs.output))
        self.assertEqual(cosine(table.vector(0), table.vector(1)), 0.0)

    def test_unflagged_zero_row_rejected(self):
        """未标记的零向量为数据错误"""
        with self.assertRaises(DataError):
            EmbeddingTable(Vocabulary.create(["a"]), np.zeros((1, 2)))

    def test_non_finite_rejected(self):
        """非有限值带坐标报错"""
        with self.assertRaises(DataError) as ctx:
            EmbeddingTable(Vocabulary.create(["a", "b"]), np.array([[1.0, 1.0], [1.0, np.nan]]))
        self.assertEqual(ctx.exception.coordinates, (1, 1))

    def test_read_only(self):
        """加载后的向量只读"""
        table = EmbeddingTable(Vocabulary.create(["a"]), np.ones((1, 2)))
        with self.assertRaises(ValueError):
            table.vectors[0, 0] = 5.0

    def test_concatenate_offsets_second_source(self):
        """拼接表的第二来源id偏移第一来源大小"""
        first = EmbeddingTable(Vocabulary.create(["dog"]), np.array([[1.0, 0.0]]))
        second = EmbeddingTable(Vocabulary.create(["dog", "beach"]), np.array([[0.0, 1.0], [1.0, 1.0]]))
        union = EmbeddingTable.concatenate(first, second)
        self.assertEqual(union.vocab.labels, ("object:dog", "scene:dog", "scene:beach"))
        np.testing.assert_array_equal(union.vector(2), [1.0, 1.0])


class TestLoaders(unittest.TestCase):
    """文件格式测试"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def _path(self, name):
        return os.path.join(self.tmp.name, name)

    def test_factory_formats(self):
        """两种格式均已注册"""
        self.assertIn("word2vec_text", TableLoaderFactory.list_formats())
        self.assertIn("binary_table", TableLoaderFactory.list_formats())
        self.assertIsInstance(TableLoaderFactory.create_loader("word2vec_text"), Word2VecTextLoader)
        self.assertIsInstance(TableLoaderFactory.create_loader("binary_table"), BinaryTableLoader)

    def test_factory_unknown_format(self):
        """未注册格式为参数错误"""
        with self.assertRaises(ArgumentError):
            TableLoaderFactory.create_loader("glove")

    def test_word2vec_with_and_without_header(self):
        """有无头部行读取结果一致"""
        vectors = np.array([[0.5, -1.0], [2.0, 0.25]])
        write_word2vec_text(self._path("h.txt"), ["dog", "cat"], vectors, header=True)
        write_word2vec_text(self._path("n.txt"), ["dog", "cat"], vectors, header=False)
        loader = TableLoaderFactory.create_loader("word2vec_text")
        with_header = loader.read_token_index(self._path("h.txt"))
        without_header = loader.read_token_index(self._path("n.txt"))
        self.assertEqual(with_header.tokens, ["dog", "cat"])
        np.testing.assert_allclose(with_header.vectors, vectors)
        np.testing.assert_allclose(without_header.vectors, vectors)

    def test_word2vec_numeric_first_word_one_dimension(self):
        """一维无头文件首行以数字为词时不被当作头部"""
        with open(self._path("one.txt"), "w", encoding="utf-8") as f:
            f.write("5 3\ndog 1.5\ncat -2\n")
        raw = TableLoaderFactory.create_loader("word2vec_text").read_token_index(self._path("one.txt"))
        self.assertEqual(raw.tokens, ["5", "dog", "cat"])
        np.testing.assert_array_equal(raw.vectors[:, 0], [3.0, 1.5, -2.0])

        with open(self._path("count.txt"), "w", encoding="utf-8") as f:
            f.write("3 1\ndog 1.5\n")
        raw = TableLoaderFactory.create_loader("word2vec_text").read_token_index(self._path("count.txt"))
        self.assertEqual(raw.tokens, ["3", "dog"])

    def test_word2vec_numeric_first_word_wider_rows(self):
        """首行维度与后续行不符时按一维数据处理并报告行号"""
        with open(self._path("mix.txt"), "w", encoding="utf-8") as f:
            f.write("7 4\ndog 1 2\n")
        with self.assertRaises(FormatError) as ctx:
            TableLoaderFactory.create_loader("word2vec_text").read_token_index(self._path("mix.txt"))
        self.assertEqual(ctx.exception.line, 2)

    def test_word2vec_one_dimension_header(self):
        """一维文件的头部行数匹配时仍按头部处理"""
        with open(self._path("h1.txt"), "w", encoding="utf-8") as f:
            f.write("2 1\ndog 1.5\ncat -2\n")
        raw = TableLoaderFactory.create_loader("word2vec_text").read_token_index(self._path("h1.txt"))
        self.assertEqual(raw.tokens, ["dog", "cat"])

    def test_word2vec_bad_component_count(self):
        """分量个数不一致时报告行号"""
        with open(self._path("bad.txt"), "w", encoding="utf-8") as f:
            f.write("2 3\ndog 1 2 3\ncat 1 2\n")
        loader = TableLoaderFactory.create_loader("word2vec_text")
        with self.assertRaises(FormatError) as ctx:
            loader.read_token_index(self._path("bad.txt"))
        self.assertEqual(ctx.exception.line, 3)

    def test_word2vec_unparsable_value(self):
        """无法解析的数值报告行号"""
        with open(self._path("bad.txt"), "w", encoding="utf-8") as f:
            f.write("dog 1 x\n")
        with self.assertRaises(FormatError) as ctx:
            TableLoaderFactory.create_loader("word2vec_text").read_token_index(self._path("bad.txt"))
        self.assertEqual(ctx.exception.line, 1)

    def test_binary_table(self):
        """ZSEB格式按标签匹配词表"""
        vectors = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=np.float32)
        write_binary_table(self._path("t.zseb"), ["horse", "racing"], vectors)
        vocab = Vocabulary.create(["racing", "horse racing"])
        table = load_embedding_table(self._path("t.zseb"), "binary_table", vocab)
        np.testing.assert_array_equal(table.vector(0), [3.0, 4.0])
        np.testing.assert_allclose(table.vector(1), [2.0, 3.0])

    def test_binary_table_bad_magic(self):
        """魔数错误为格式错误"""
        with open(self._path("x.zseb"), "wb") as f:
            f.write(b"NOPE" + b"\x00" * 20)
        with self.assertRaises(FormatError):
            TableLoaderFactory.create_loader("binary_table").read_token_index(self._path("x.zseb"))

    def test_binary_table_truncated(self):
        """截断的文件为格式错误"""
        write_binary_table(self._path("t.zseb"), ["a", "b"], np.ones((2, 4)))
        with open(self._path("t.zseb"), "rb") as f:
            data = f.read()
        with open(self._path("t.zseb"), "wb") as f:
            f.write(data[:30])
        with self.assertRaises(FormatError):
            TableLoaderFactory.create_loader("binary_table").read_token_index(self._path("t.zseb"))


if __name__ == '__main__':
    unittest.main()
