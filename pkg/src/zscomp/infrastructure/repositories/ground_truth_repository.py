"""
基础设施层 - 真实标签文件仓储
CSV格式: video_id,action_label
"""
import csv
from pathlib import Path
from typing import List, Tuple, Union

from ...domain.embedding.vocabulary import Vocabulary
from ...domain.evaluation.ground_truth import GroundTruth
from ...domain.exceptions import FormatError

GROUND_TRUTH_HEADER = ("video_id", "action_label")


def load_ground_truth(path: Union[str, Path], action_vocab: Vocabulary) -> GroundTruth:
    """读取真实标签CSV

    Raises:
        FormatError: 表头或列数不正确（带行号）
        DataError: 动作标签不在词表中，或视频重复
    """
    pairs: List[Tuple[str, str]] = []
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != GROUND_TRUTH_HEADER:
            raise FormatError(str(path), f"表头必须为 {','.join(GROUND_TRUTH_HEADER)}", 1)
        for line_no, record in enumerate(reader, 2):
            if not record or (len(record) == 1 and not record[0].strip()):
                continue
            if len(record) != 2:
                raise FormatError(str(path), f"期望 2 列，实际 {len(record)} 列", line_no)
            pairs.append((record[0].strip(), record[1].strip()))
    return GroundTruth.from_label_pairs(pairs, action_vocab)


def write_ground_truth(path: Union[str, Path], truth: GroundTruth) -> None:
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(GROUND_TRUTH_HEADER)
        for video_id, action_id in truth.labels.items():
            writer.writerow([video_id, truth.action_vocab.label_of(action_id)])
