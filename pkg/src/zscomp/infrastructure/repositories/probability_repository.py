"""
基础设施层 - 概率矩阵文件仓储
支持CSV与ZSPM二进制两种格式
"""
import csv
import logging
import os
from collections import OrderedDict
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from ...domain.embedding.vocabulary import Vocabulary
from ...domain.exceptions import ArgumentError, DataError, FormatError, SchemaError
from ...domain.probability.matrix import FrameProbabilityBlock, ProbabilityMatrix
from ..codecs.binary_format import (
    read_f32_block, read_header, read_strings,
    write_f32_block, write_header, write_strings,
)

logger = logging.getLogger(__name__)

ZSPM_MAGIC = b"ZSPM"
VIDEO_ID_COLUMN = "video_id"
PROBABILITY_FORMATS = ("csv", "zspm_binary")

PathLike = Union[str, Path]


def load_probability_matrix(path: PathLike, fmt: str, vocab: Vocabulary,
                            renormalize: bool = False) -> ProbabilityMatrix:
    """加载视频级概率矩阵

    Args:
        path: 文件路径
        fmt: csv | zspm_binary
        vocab: 列对应的词表
        renormalize: 行和超差时是否重新归一化

    Returns:
        校验后的概率矩阵

    Raises:
        SchemaError: 列与词表不一致
        DataError: 非有限值（带坐标）
        RowRejectedError: 行和超差且未开启重新归一化
    """
    if fmt == "csv":
        video_ids, values = _read_csv(str(path), vocab)
    elif fmt == "zspm_binary":
        video_ids, values = _read_zspm(str(path), vocab)
    else:
        raise ArgumentError(f"不支持的概率矩阵格式: {fmt}，可选: {list(PROBABILITY_FORMATS)}")
    matrix = ProbabilityMatrix(video_ids, vocab, values, renormalize=renormalize)
    logger.info(f"已加载概率矩阵 {path}: {matrix.shape[0]} 个视频 × {matrix.shape[1]} 个标签")
    return matrix


def load_frame_csv(path: PathLike, vocab: Vocabulary) -> ProbabilityMatrix:
    """加载逐帧CSV（同一视频id可出现多行）并聚合为视频级矩阵"""
    video_ids, values = _read_csv(str(path), vocab)
    grouped: "OrderedDict[str, List[np.ndarray]]" = OrderedDict()
    for video_id, row in zip(video_ids, values):
        grouped.setdefault(video_id, []).append(row)
    blocks = [FrameProbabilityBlock(video_id, np.vstack(rows))
              for video_id, rows in grouped.items()]
    return ProbabilityMatrix.from_frames(blocks, vocab)


def write_probability_csv(path: PathLike, matrix: ProbabilityMatrix,
                          precision: int = 8) -> None:
    """写出CSV概率矩阵"""
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow([VIDEO_ID_COLUMN, *matrix.vocab.labels])
        for video_id, row in zip(matrix.video_ids, matrix.values):
            writer.writerow([video_id, *(f"{x:.{precision}f}" for x in row)])


def write_zspm(path: PathLike, matrix: ProbabilityMatrix) -> None:
    """写出ZSPM二进制矩阵及旁车词表文件"""
    with open(path, 'wb') as f:
        write_header(f, ZSPM_MAGIC, matrix.shape)
        write_f32_block(f, matrix.values)
        write_strings(f, matrix.video_ids)
    matrix.vocab.to_file(sidecar_path(path))


def sidecar_path(path: PathLike) -> str:
    """ZSPM的旁车词表路径"""
    return f"{path}.vocab"


def _read_csv(path: str, vocab: Vocabulary) -> Tuple[List[str], np.ndarray]:
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(path, "文件为空") from None
        if not header or header[0].strip() != VIDEO_ID_COLUMN:
            raise FormatError(path, f"首列必须为 {VIDEO_ID_COLUMN}", 1)
        _check_columns(path, [h.strip() for h in header[1:]], vocab)

        video_ids: List[str] = []
        rows: List[List[float]] = []
        for line_no, record in enumerate(reader, 2):
            if not record or (len(record) == 1 and not record[0].strip()):
                continue
            if len(record) != len(vocab) + 1:
                raise FormatError(path, f"期望 {len(vocab) + 1} 列，实际 {len(record)} 列", line_no)
            try:
                row = [float(x) for x in record[1:]]
            except ValueError as e:
                raise FormatError(path, f"无法解析数值: {e}", line_no) from e
            for col, value in enumerate(row):
                if not np.isfinite(value):
                    raise DataError(
                        f"{path}: 视频 {record[0]} 第 {col} 列为非有限值",
                        video_id=record[0], coordinates=(len(rows), col))
            video_ids.append(record[0].strip())
            rows.append(row)

    values = np.asarray(rows, dtype=np.float64).reshape(len(rows), len(vocab))
    return video_ids, values


def _read_zspm(path: str, vocab: Vocabulary) -> Tuple[List[str], np.ndarray]:
    sidecar = sidecar_path(path)
    if not os.path.exists(sidecar):
        raise FormatError(path, f"缺少旁车词表文件 {sidecar}")
    _check_columns(path, list(Vocabulary.from_file(sidecar).labels), vocab)
    with open(path, 'rb') as f:
        rows, cols = read_header(f, path, ZSPM_MAGIC, 2)
        if cols != len(vocab):
            raise SchemaError(f"{path}: 列数 {cols} 与词表大小 {len(vocab)} 不一致")
        values = read_f32_block(f, path, rows, cols)
        video_ids = read_strings(f, path, rows)
    finite = np.isfinite(values)
    if not finite.all():
        r, c = (int(x) for x in np.argwhere(~finite)[0])
        raise DataError(f"{path}: 视频 {video_ids[r]} 第 {c} 列为非有限值",
                        video_id=video_ids[r], coordinates=(r, c))
    return video_ids, values


def _check_columns(path: str, columns: Sequence[str], vocab: Vocabulary) -> None:
    """列名必须与词表标签完全一致且顺序相同"""
    for i in range(max(len(columns), len(vocab))):
        expected = vocab.labels[i] if i < len(vocab) else None
        actual = columns[i] if i < len(columns) else None
        if expected != actual:
            divergent = actual if actual is not None else expected
            raise SchemaError(
                f"{path}: 第 {i} 列 '{actual}' 与词表标签 '{expected}' 不一致",
                divergent_label=divergent)
