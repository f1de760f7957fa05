"""
导出与真实标签文件测试
"""
import os
import tempfile
import unittest

import numpy as np
import orjson

from tests.fixtures import make_vocab
from zscomp.domain.composition import CompositionRef
from zscomp.domain.evaluation import GroundTruth
from zscomp.domain.exceptions import DataError, FormatError
from zscomp.domain.selection import ActionCompositionSet, SelectedComposition, SelectionConfig
from zscomp.infrastructure.exporters import (
    dumps_report, selection_file_name, write_json, write_selection_csv,
)
from zscomp.infrastructure.repositories import load_ground_truth, write_ground_truth


class TestGroundTruthRepository(unittest.TestCase):
    """真实标签CSV测试"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.vocab = make_vocab("act", 3)

    def _write(self, text):
        path = os.path.join(self.tmp.name, "truth.csv")
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return path

    def test_round_trip(self):
        """写出后读回"""
        truth = GroundTruth({"v1": 2, "v2": 0}, self.vocab)
        path = os.path.join(self.tmp.name, "truth.csv")
        write_ground_truth(path, truth)
        self.assertEqual(load_ground_truth(path, self.vocab).labels, {"v1": 2, "v2": 0})

    def test_bad_header(self):
        """表头错误报告第1行"""
        with self.assertRaises(FormatError) as ctx:
            load_ground_truth(self._write("video,label\nv1,act000\n"), self.vocab)
        self.assertEqual(ctx.exception.line, 1)

    def test_bad_column_count(self):
        """列数错误报告行号"""
        path = self._write("video_id,action_label\nv1,act000\nv2,act001,extra\n")
        with self.assertRaises(FormatError) as ctx:
            load_ground_truth(path, self.vocab)
        self.assertEqual(ctx.exception.line, 3)

    def test_unknown_action(self):
        """未知动作为数据错误"""
        with self.assertRaises(DataError):
            load_ground_truth(self._write("video_id,action_label\nv1,dance\n"), self.vocab)


class TestExporters(unittest.TestCase):
    """CSV与JSON导出测试"""

    def test_selection_csv(self):
        """组合集合CSV的排名从1开始"""
        comp_set = ActionCompositionSet(
            1,
            (SelectedComposition(CompositionRef(0, 1), 0.5, 0.5, 1.0),
             SelectedComposition(CompositionRef(1, 0), 0.25, -0.125, 1.0)),
            SelectionConfig(k=2),
        )
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, selection_file_name(1))
            write_selection_csv(path, comp_set, make_vocab("act", 2), make_vocab("obj", 2),
                                make_vocab("scn", 2))
            with open(path, encoding="utf-8") as f:
                lines = f.read().splitlines()
        self.assertTrue(path.endswith("action_0001.csv"))
        self.assertEqual(lines[1], "act001,1,obj000,scn001,0.5,0.5")
        self.assertEqual(lines[2], "act001,2,obj001,scn000,0.25,-0.125")

    def test_report_deterministic_except_timestamp(self):
        """相同内容与时间戳得到相同字节，键有序"""
        payload = {"b": np.float64(0.5), "a": [1, 2]}
        first = dumps_report(payload, generated_at="t")
        second = dumps_report(dict(reversed(list(payload.items()))), generated_at="t")
        self.assertEqual(first, second)
        data = orjson.loads(first)
        self.assertEqual(list(data), ["a", "b", "generated_at"])

    def test_write_json_has_no_timestamp(self):
        """write_json 不添加时间戳"""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "config.json")
            write_json(path, {"seed": 1})
            with open(path, "rb") as f:
                self.assertEqual(orjson.loads(f.read()), {"seed": 1})


if __name__ == '__main__':
    unittest.main()
