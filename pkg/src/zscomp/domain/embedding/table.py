"""
Embedding表实体
"""
import logging
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from ..exceptions import ArgumentError, DataError
from .base import OOVPolicy, RawTable, embed_label, normalize_token
from .vocabulary import SourceKind, Vocabulary

logger = logging.getLogger(__name__)


class EmbeddingTable:
    """标签id到d维向量的映射，加载后只读"""

    def __init__(self,
                 vocab: Vocabulary,
                 vectors: np.ndarray,
                 token_index: Optional[Mapping[str, np.ndarray]] = None,
                 oov_mask: Optional[np.ndarray] = None):
        vectors = np.array(vectors, dtype=np.float64, copy=True)
        if vectors.ndim != 2 or vectors.shape[0] != len(vocab):
            raise ArgumentError(
                f"向量表形状 {vectors.shape} 与词表大小 {len(vocab)} 不一致")
        if vectors.shape[1] < 1:
            raise ArgumentError("向量维度必须为正整数")
        if not np.all(np.isfinite(vectors)):
            bad = np.argwhere(~np.isfinite(vectors))[0]
            raise DataError(f"标签 '{vocab.labels[bad[0]]}' 的向量包含非有限值",
                            coordinates=(int(bad[0]), int(bad[1])))
        if oov_mask is None:
            oov_mask = np.zeros(len(vocab), dtype=bool)
        norms = np.linalg.norm(vectors, axis=1)
        zero_rows = (norms == 0.0) & ~oov_mask
        if np.any(zero_rows):
            label = vocab.labels[int(np.argmax(zero_rows))]
            raise DataError(f"标签 '{label}' 为零向量但未标记为OOV")

        vectors.setflags(write=False)
        norms.setflags(write=False)
        oov_mask = np.array(oov_mask, dtype=bool)
        oov_mask.setflags(write=False)

        self.vocab = vocab
        self.vectors = vectors
        self.norms = norms
        self.oov_mask = oov_mask
        self.token_index: Dict[str, np.ndarray] = dict(token_index or {})

    @classmethod
    def from_raw(cls, raw: RawTable, vocab: Vocabulary,
                 policy: OOVPolicy = OOVPolicy.FAIL) -> 'EmbeddingTable':
        """由原始词向量为词表中每个标签构造向量

        标签与文件中的词完全一致时直接取该行，否则按短语组合。

        Args:
            raw: 文件中的原始词与向量
            vocab: 词表
            policy: 全部词缺失时的策略

        Returns:
            Embedding表
        """
        exact: Dict[str, np.ndarray] = {}
        token_index: Dict[str, np.ndarray] = {}
        for token, vector in zip(raw.tokens, raw.vectors):
            exact.setdefault(token.strip(), vector)
            key = normalize_token(token)
            if key:
                token_index.setdefault(key, vector)

        d = raw.dimension
        vectors = np.zeros((len(vocab), d), dtype=np.float64)
        oov_mask = np.zeros(len(vocab), dtype=bool)
        cancelled = []
        for i, label in enumerate(vocab.labels):
            if label in exact:
                vectors[i] = exact[label]
            else:
                vector = embed_label(label, token_index, policy, dimension=d)
                if vector is None:
                    oov_mask[i] = True
                    continue
                vectors[i] = vector
            if not np.any(vectors[i]):
                # 词向量相互抵消或文件中即为零向量，按退化向量处理
                oov_mask[i] = True
                cancelled.append(label)

        missing = int(oov_mask.sum()) - len(cancelled)
        if missing:
            logger.warning(f"{missing} 个{vocab.source_kind.value}标签完全不在词表中，"
                           f"已使用零向量")
        if cancelled:
            logger.warning(f"{len(cancelled)} 个{vocab.source_kind.value}标签的向量为零，"
                           f"已标记为OOV，相似度按0计: {cancelled[:5]}")
        return cls(vocab, vectors, token_index=token_index, oov_mask=oov_mask)

    @property
    def dimension(self) -> int:
        return int(self.vectors.shape[1])

    def vector(self, label_id: int) -> np.ndarray:
        """获取标签向量"""
        if not 0 <= label_id < len(self.vocab):
            raise ArgumentError(f"标签id越界: {label_id}")
        return self.vectors[label_id]

    def normalized(self) -> 'EmbeddingTable':
        """返回行归一化后的副本（OOV零向量保持为零）"""
        norms = np.where(self.norms == 0.0, 1.0, self.norms)
        return EmbeddingTable(self.vocab, self.vectors / norms[:, None],
                              token_index=self.token_index,
                              oov_mask=self.oov_mask)

    def subset(self, label_ids) -> 'EmbeddingTable':
        """按id取子表"""
        ids = list(label_ids)
        return EmbeddingTable(self.vocab.subset(ids), self.vectors[ids],
                              token_index=self.token_index,
                              oov_mask=self.oov_mask[ids])

    @classmethod
    def concatenate(cls, first: 'EmbeddingTable', second: 'EmbeddingTable',
                    prefixes: Tuple[str, str] = ("object", "scene")) -> 'EmbeddingTable':
        """拼接两个向量表，标签加来源前缀，第二个表的id偏移 len(first)"""
        if first.dimension != second.dimension:
            raise ArgumentError(
                f"两个向量表维度不一致: {first.dimension} vs {second.dimension}")
        labels = ([f"{prefixes[0]}:{label}" for label in first.vocab.labels]
                  + [f"{prefixes[1]}:{label}" for label in second.vocab.labels])
        return cls(Vocabulary.create(labels, SourceKind.GENERIC),
                   np.vstack([first.vectors, second.vectors]),
                   oov_mask=np.concatenate([first.oov_mask, second.oov_mask]))

    def __len__(self) -> int:
        return len(self.vocab)
