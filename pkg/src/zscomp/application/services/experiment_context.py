"""
应用层 - 实验上下文

按需加载词表、向量表、概率矩阵与真实标签，并持有组合空间。
既可以从 RunConfig 指向的文件加载，也可以直接注入内存对象。
"""
import logging
import os
import threading
from typing import Any, Callable, Dict, Optional

from ...domain.composition.space import CompositionSpace
from ...domain.embedding.factory import load_embedding_table
from ...domain.embedding.table import EmbeddingTable
from ...domain.embedding.vocabulary import SourceKind, Vocabulary
from ...domain.evaluation.ground_truth import GroundTruth
from ...domain.exceptions import ConfigurationError
from ...domain.probability.matrix import ProbabilityMatrix
from ...infrastructure.repositories.ground_truth_repository import load_ground_truth
from ...infrastructure.repositories.probability_repository import (
    load_frame_csv, load_probability_matrix,
)
from ..dto.run_config import RunConfig

logger = logging.getLogger(__name__)


class ExperimentContext:
    """一次运行共享的只读输入"""

    def __init__(self, config: RunConfig, threads: int = 1, **preloaded: Any):
        """
        Args:
            config: 运行配置
            threads: 线程数
            **preloaded: 已在内存中的组件，名称与属性一致
                （object_vocab, object_table, object_matrix, truth, space 等）
        """
        self.config = config
        self.threads = max(1, int(threads))
        self._items: Dict[str, Any] = dict(preloaded)
        self._lock = threading.RLock()

    def _get(self, name: str, loader: Callable[[], Any]) -> Any:
        with self._lock:
            if name not in self._items:
                self._items[name] = loader()
            return self._items[name]

    def _path(self, field: str) -> str:
        value = getattr(self.config, field)
        if not value:
            raise ConfigurationError(field, "未配置")
        return value

    # ------------------------------------------------------------------
    # 词表
    # ------------------------------------------------------------------

    @property
    def object_vocab(self) -> Vocabulary:
        return self._get("object_vocab", lambda: Vocabulary.from_file(
            self._path("object_vocab"), SourceKind.OBJECTS))

    @property
    def scene_vocab(self) -> Vocabulary:
        return self._get("scene_vocab", lambda: Vocabulary.from_file(
            self._path("scene_vocab"), SourceKind.SCENES))

    @property
    def action_vocab(self) -> Vocabulary:
        return self._get("action_vocab", lambda: Vocabulary.from_file(
            self._path("action_vocab"), SourceKind.ACTIONS))

    # ------------------------------------------------------------------
    # 向量表
    # ------------------------------------------------------------------

    @property
    def object_table(self) -> EmbeddingTable:
        return self._get("object_table", lambda: load_embedding_table(
            self._path("object_embeddings"), self.config.object_embedding_format,
            self.object_vocab, self.config.oov))

    @property
    def scene_table(self) -> EmbeddingTable:
        return self._get("scene_table", lambda: load_embedding_table(
            self._path("scene_embeddings"), self.config.scene_embedding_format,
            self.scene_vocab, self.config.oov))

    @property
    def action_table(self) -> EmbeddingTable:
        return self._get("action_table", lambda: load_embedding_table(
            self._path("action_embeddings"), self.config.action_embedding_format,
            self.action_vocab, self.config.oov))

    @property
    def union_table(self) -> EmbeddingTable:
        """拼接基线使用的 物体⊕场景 联合向量表"""
        return self._get("union_table", lambda: EmbeddingTable.concatenate(
            self.object_table, self.scene_table))

    # ------------------------------------------------------------------
    # 概率矩阵与真实标签
    # ------------------------------------------------------------------

    def _load_matrix(self, field: str, vocab: Vocabulary) -> ProbabilityMatrix:
        path = self._path(field)
        if self.config.frame_level:
            if self.config.probability_format != "csv":
                raise ConfigurationError("frame_level", "逐帧输入只支持csv格式")
            return load_frame_csv(path, vocab)
        return load_probability_matrix(path, self.config.probability_format, vocab,
                                       renormalize=self.config.renormalize)

    @property
    def object_matrix(self) -> ProbabilityMatrix:
        return self._get("object_matrix",
                         lambda: self._load_matrix("object_probabilities", self.object_vocab))

    @property
    def scene_matrix(self) -> ProbabilityMatrix:
        return self._get("scene_matrix",
                         lambda: self._load_matrix("scene_probabilities", self.scene_vocab))

    @property
    def truth(self) -> GroundTruth:
        return self._get("truth", lambda: load_ground_truth(
            self._path("ground_truth"), self.action_vocab))

    # ------------------------------------------------------------------
    # 组合空间
    # ------------------------------------------------------------------

    @property
    def space(self) -> CompositionSpace:
        return self._get("space", self._build_space)

    def _build_space(self) -> CompositionSpace:
        space = CompositionSpace(self.object_table, self.scene_table,
                                 normalize_before_sum=self.config.normalize_before_sum,
                                 exclude_self_pairs=self.config.exclude_self_pairs)
        cache_path = self.config.cache_path
        if cache_path and os.path.exists(cache_path):
            logger.info(f"读取组合缓存 {cache_path}")
            space.load_cache(cache_path)
        else:
            space.build_caches()
            if cache_path:
                space.save_cache(cache_path)
                logger.info(f"组合缓存已写出 {cache_path}")
        return space
