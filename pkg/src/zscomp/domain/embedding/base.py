"""
Embedding基础工具：分词、短语向量与余弦相似度
"""
import logging
import re
import threading
from enum import Enum
from typing import List, Mapping, Optional, Protocol, Union
from pathlib import Path

import numpy as np

from ..exceptions import ArgumentError, MissingLabelError

logger = logging.getLogger(__name__)

_TOKEN_SPLIT = re.compile(r"[\s_]+")
_PUNCTUATION = re.compile(r"[^\w]+", re.UNICODE)


class OOVPolicy(Enum):
    """整个标签都不在词表中时的处理策略"""
    FAIL = "fail"
    ZERO = "zero"


class DegeneracyCounter:
    """零向量余弦的计数器，按操作汇总后只告警一次"""

    def __init__(self, name: str = "cosine"):
        self.name = name
        self._count = 0
        self._lock = threading.Lock()

    def record(self, n: int = 1) -> None:
        if n <= 0:
            return
        with self._lock:
            self._count += n

    @property
    def count(self) -> int:
        return self._count

    def reset(self) -> None:
        with self._lock:
            self._count = 0

    def warn_if_any(self) -> None:
        """存在退化情况时输出一条告警"""
        if self._count:
            logger.warning(f"{self.name}: {self._count} 次零范数余弦，已按0处理")


def tokenize(label: str) -> List[str]:
    """按空白和下划线切分、转小写并去掉标点

    Args:
        label: 原始标签，如 "Horse_Racing"

    Returns:
        词列表，如 ["horse", "racing"]
    """
    tokens = []
    for raw in _TOKEN_SPLIT.split(label.strip().lower()):
        token = _PUNCTUATION.sub("", raw)
        if token:
            tokens.append(token)
    return tokens


def normalize_token(token: str) -> str:
    """词表键的规范形式，与tokenize保持一致"""
    return _PUNCTUATION.sub("", token.strip().lower())


def embed_label(label: str,
                token_index: Mapping[str, np.ndarray],
                policy: OOVPolicy = OOVPolicy.FAIL,
                dimension: Optional[int] = None) -> Optional[np.ndarray]:
    """计算标签的向量表示

    多词标签取找到的词向量的算术平均，缺失的词直接跳过。

    Args:
        label: 标签文本
        token_index: 规范化词到向量的映射
        policy: 全部词缺失时的策略
        dimension: 向量维度，ZERO策略且词表为空时需要

    Returns:
        标签向量；ZERO策略下全部缺失时返回None，由调用方记为OOV零向量

    Raises:
        ArgumentError: 标签为空
        MissingLabelError: FAIL策略下全部词缺失
    """
    if not label or not label.strip():
        raise ArgumentError("标签不能为空")

    found = [token_index[t] for t in tokenize(label) if t in token_index]
    if not found:
        if policy is OOVPolicy.FAIL:
            raise MissingLabelError(label)
        return None
    if len(found) == 1:
        return np.array(found[0], dtype=np.float64, copy=True)
    return np.mean(np.stack(found), axis=0)


class EmbeddingUtils:
    """向量工具类"""

    @staticmethod
    def cosine(u: np.ndarray, v: np.ndarray,
               counter: Optional[DegeneracyCounter] = None) -> float:
        """计算余弦相似度

        任一向量范数为0时返回0并计入退化计数。

        Args:
            u: 向量1
            v: 向量2
            counter: 退化计数器

        Returns:
            [-1, 1] 区间内的相似度
        """
        u = np.asarray(u, dtype=np.float64)
        v = np.asarray(v, dtype=np.float64)
        if u.shape != v.shape:
            raise ArgumentError(f"向量维度不匹配: {u.shape} vs {v.shape}")
        norm_u = float(np.sqrt(np.dot(u, u)))
        norm_v = float(np.sqrt(np.dot(v, v)))
        if norm_u == 0.0 or norm_v == 0.0:
            if counter is not None:
                counter.record()
            return 0.0
        value = float(np.dot(u, v)) / (norm_u * norm_v)
        return min(1.0, max(-1.0, value))

    @staticmethod
    def cosine_to_rows(matrix: np.ndarray, v: np.ndarray,
                       norms: Optional[np.ndarray] = None,
                       counter: Optional[DegeneracyCounter] = None) -> np.ndarray:
        """批量计算矩阵每一行与向量的余弦相似度"""
        v = np.asarray(v, dtype=np.float64)
        if norms is None:
            norms = np.linalg.norm(matrix, axis=1)
        norm_v = float(np.linalg.norm(v))
        dots = matrix @ v
        denom = norms * norm_v
        degenerate = denom == 0.0
        if counter is not None:
            counter.record(int(degenerate.sum()))
        with np.errstate(divide='ignore', invalid='ignore'):
            sims = np.where(degenerate, 0.0, dots / np.where(degenerate, 1.0, denom))
        return np.clip(sims, -1.0, 1.0)

    @staticmethod
    def normalize_rows(matrix: np.ndarray) -> np.ndarray:
        """行归一化，零行保持不变"""
        norms = np.linalg.norm(matrix, axis=1, keepdims=True)
        return matrix / np.where(norms == 0.0, 1.0, norms)


def cosine(u: np.ndarray, v: np.ndarray,
           counter: Optional[DegeneracyCounter] = None) -> float:
    """余弦相似度的便捷函数"""
    return EmbeddingUtils.cosine(u, v, counter)


class BaseTableLoader(Protocol):
    """向量表加载器协议"""

    def read_token_index(self, path: Union[str, Path]) -> "RawTable":
        """读取文件中的所有行

        Args:
            path: 文件路径

        Returns:
            原始行（词列表与向量矩阵）
        """
        ...

    def get_format_name(self) -> str:
        """获取格式名称"""
        ...


class RawTable:
    """文件中读出的原始词与向量"""

    def __init__(self, tokens: List[str], vectors: np.ndarray):
        if vectors.ndim != 2 or vectors.shape[0] != len(tokens):
            raise ArgumentError("原始向量表的行数与词数不一致")
        self.tokens = tokens
        self.vectors = vectors

    @property
    def dimension(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return len(self.tokens)
