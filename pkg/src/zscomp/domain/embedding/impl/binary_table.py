"""
ZSEB二进制向量表

魔数 "ZSEB"、u32 版本、u64 行数、u64 维度、行优先 f32 数据，
最后是行数个长度前缀的UTF-8标签。
"""
import logging
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from ....infrastructure.codecs.binary_format import (
    read_f32_block, read_header, read_strings,
    write_f32_block, write_header, write_strings,
)
from ...exceptions import FormatError
from ..base import BaseTableLoader, RawTable
from ..registry import LoaderConfig, register_loader

logger = logging.getLogger(__name__)

MAGIC = b"ZSEB"


@register_loader("binary_table", LoaderConfig)
class BinaryTableLoader(BaseTableLoader):
    """ZSEB格式加载器"""

    def __init__(self, config: LoaderConfig):
        self.config = config

    def read_token_index(self, path: Union[str, Path]) -> RawTable:
        path = str(path)
        with open(path, 'rb') as f:
            count, dimension = read_header(f, path, MAGIC, 2)
            if dimension == 0:
                raise FormatError(path, "维度必须为正整数")
            vectors = read_f32_block(f, path, count, dimension)
            labels = read_strings(f, path, count)
        if not np.all(np.isfinite(vectors)):
            row = int(np.argwhere(~np.isfinite(vectors))[0][0])
            raise FormatError(path, f"第 {row} 行向量包含非有限值")
        logger.info(f"已读取 {path}: {count} 行，维度 {dimension}")
        return RawTable(labels, vectors)

    def get_format_name(self) -> str:
        return "binary_table"


def write_binary_table(path: Union[str, Path], labels: Sequence[str],
                       vectors: np.ndarray) -> None:
    """写出ZSEB文件"""
    vectors = np.asarray(vectors)
    with open(path, 'wb') as f:
        write_header(f, MAGIC, (len(labels), vectors.shape[1]))
        write_f32_block(f, vectors)
        write_strings(f, labels)
