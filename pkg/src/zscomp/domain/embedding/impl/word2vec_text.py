"""
word2vec文本格式

可选的首行头 "N d"，其后每行为一个词及d个空格分隔的浮点数。
"""
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from ...exceptions import FormatError
from ..base import BaseTableLoader, RawTable
from ..registry import LoaderConfig, register_loader

logger = logging.getLogger(__name__)


class Word2VecTextConfig(LoaderConfig):
    """word2vec文本格式配置"""

    def __init__(self, encoding: str = "utf-8", errors: str = "strict", **kwargs):
        super().__init__(encoding=encoding, **kwargs)
        self.errors = errors


@register_loader("word2vec_text", Word2VecTextConfig)
class Word2VecTextLoader(BaseTableLoader):
    """word2vec文本格式加载器"""

    def __init__(self, config: Word2VecTextConfig):
        self.config = config

    def read_token_index(self, path: Union[str, Path]) -> RawTable:
        """读取word2vec文本文件

        Args:
            path: 文件路径

        Returns:
            原始词与向量

        Raises:
            FormatError: 行的分量个数不一致或数值无法解析，带行号
        """
        path = str(path)
        tokens: List[str] = []
        rows: List[List[float]] = []
        dimension: Optional[int] = None
        declared_count: Optional[int] = None
        pending: Optional[Sequence[str]] = None
        header: Optional[Sequence[str]] = None

        with open(path, 'r', encoding=self.config.encoding,
                  errors=self.config.errors) as f:
            for line_no, line in enumerate(f, 1):
                parts = line.rstrip('\r\n').split()
                if not parts:
                    continue
                if line_no == 1 and _looks_like_header(parts):
                    # 形如 "N d" 的首行要等到下一行才能确定是否为头部
                    pending = parts
                    continue
                if pending is not None:
                    if len(parts) - 1 == int(pending[1]):
                        declared_count, dimension = int(pending[0]), int(pending[1])
                        header = pending
                    else:
                        dimension = 1
                        tokens.append(pending[0])
                        rows.append([float(pending[1])])
                    pending = None
                values = parts[1:]
                if dimension is None:
                    dimension = len(values)
                    if dimension == 0:
                        raise FormatError(path, "行中没有向量分量", line_no)
                if len(values) != dimension:
                    raise FormatError(
                        path, f"期望 {dimension} 个分量，实际 {len(values)} 个", line_no)
                try:
                    row = [float(v) for v in values]
                except ValueError as e:
                    raise FormatError(path, f"无法解析数值: {e}", line_no) from e
                if not all(np.isfinite(row)):
                    raise FormatError(path, "向量包含非有限值", line_no)
                tokens.append(parts[0])
                rows.append(row)

        if pending is not None:
            # 只有一行时按一维数据处理
            dimension = 1
            tokens.append(pending[0])
            rows.append([float(pending[1])])
        if dimension is None:
            raise FormatError(path, "文件中没有任何向量")
        if header is not None and dimension == 1 and declared_count != len(tokens):
            # 一维文件中以数字为词的首行：行数对不上时按数据行处理
            tokens.insert(0, header[0])
            rows.insert(0, [float(header[1])])
            declared_count = None
        if declared_count is not None and declared_count != len(tokens):
            logger.warning(f"{path}: 头部声明 {declared_count} 行，实际读取 {len(tokens)} 行")
        vectors = np.asarray(rows, dtype=np.float64).reshape(len(rows), dimension)
        logger.info(f"已读取 {path}: {len(tokens)} 个词，维度 {dimension}")
        return RawTable(tokens, vectors)

    def get_format_name(self) -> str:
        return "word2vec_text"


def _looks_like_header(parts: Sequence[str]) -> bool:
    if len(parts) != 2:
        return False
    return parts[0].isdigit() and parts[1].isdigit() and int(parts[1]) > 0


def write_word2vec_text(path: Union[str, Path], tokens: Sequence[str],
                        vectors: np.ndarray, header: bool = True,
                        precision: int = 6) -> None:
    """写出word2vec文本文件

    Args:
        path: 输出路径
        tokens: 词列表（不能包含空白）
        vectors: len(tokens)×d 矩阵
        header: 是否写出 "N d" 头
        precision: 小数位数
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        if header:
            f.write(f"{len(tokens)} {vectors.shape[1]}\n")
        for token, row in zip(tokens, vectors):
            f.write(token + ' ' + ' '.join(f"{x:.{precision}f}" for x in row) + '\n')
