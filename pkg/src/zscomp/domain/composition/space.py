"""
物体-场景组合空间

组合 c=(c_o, c_s) 的表示为两者原始向量之和。所有相似度都按点积分解计算，
只缓存 |O|×|S| 的标量（组合范数与交叉点积），从不构造逐组合的向量张量。
"""
import logging
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from ...infrastructure.codecs.binary_format import (
    read_f32_block, read_header, read_trailer, write_f32_block, write_header, write_trailer,
)
from ..embedding.base import DegeneracyCounter
from ..embedding.table import EmbeddingTable
from ..exceptions import ArgumentError, InternalError

logger = logging.getLogger(__name__)

CACHE_MAGIC = b"ZSPC"
CACHE_FLAG_NORMALIZED = 0x1
BLOCK_ELEMENTS = 1 << 20


@dataclass(frozen=True, order=True)
class CompositionRef:
    """组合引用，按 (object_id, scene_id) 字典序比较"""
    object_id: int
    scene_id: int

    def __post_init__(self):
        if self.object_id < 0 or self.scene_id < 0:
            raise ArgumentError(f"组合id不能为负: ({self.object_id}, {self.scene_id})")

    def as_tuple(self) -> Tuple[int, int]:
        return (self.object_id, self.scene_id)


class CompositionSpace:
    """笛卡尔积组合空间，缓存构建完成后只读"""

    def __init__(self,
                 object_table: EmbeddingTable,
                 scene_table: EmbeddingTable,
                 normalize_before_sum: bool = False,
                 exclude_self_pairs: bool = False):
        """初始化组合空间

        Args:
            object_table: 第一来源（通常为物体）向量表
            scene_table: 第二来源（通常为场景）向量表，可与第一来源同类
            normalize_before_sum: 求和前是否先对向量做L2归一化（默认否）
            exclude_self_pairs: 是否排除 object_id == scene_id 的组合
        """
        if object_table.dimension != scene_table.dimension:
            raise ArgumentError(
                f"两个向量表维度不一致: {object_table.dimension} vs {scene_table.dimension}")
        if normalize_before_sum:
            object_table = object_table.normalized()
            scene_table = scene_table.normalized()
        self.object_table = object_table
        self.scene_table = scene_table
        self.normalize_before_sum = normalize_before_sum
        self.exclude_self_pairs = exclude_self_pairs
        self.degeneracy = DegeneracyCounter("组合相似度")

        self._objects = object_table.vectors
        self._scenes = scene_table.vectors
        self._object_norms = object_table.norms
        self._scene_norms = scene_table.norms
        self._pair_norms: Optional[np.ndarray] = None
        self._cross_dots: Optional[np.ndarray] = None
        self._cache_lock = threading.Lock()

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.object_table), len(self.scene_table))

    @property
    def size(self) -> int:
        n_o, n_s = self.shape
        return n_o * n_s

    @property
    def dimension(self) -> int:
        return self.object_table.dimension

    # ------------------------------------------------------------------
    # 缓存
    # ------------------------------------------------------------------

    def build_caches(self) -> None:
        """构建组合范数与交叉点积缓存（幂等，线程安全）"""
        if self._pair_norms is not None:
            return
        with self._cache_lock:
            if self._pair_norms is not None:
                return
            n_o, n_s = self.shape
            logger.info(f"构建组合缓存: {n_o} × {n_s}")
            cross = self._objects @ self._scenes.T
            squared = (self._object_norms ** 2)[:, None] + (self._scene_norms ** 2)[None, :] + 2.0 * cross
            pair_norms = np.sqrt(np.maximum(squared, 0.0))
            self._install_caches(pair_norms, cross)

    def _install_caches(self, pair_norms: np.ndarray, cross_dots: np.ndarray) -> None:
        if pair_norms.shape != self.shape or cross_dots.shape != self.shape:
            raise InternalError(
                f"缓存形状 {pair_norms.shape}/{cross_dots.shape} 与组合空间 {self.shape} 不一致")
        pair_norms = np.ascontiguousarray(pair_norms, dtype=np.float64)
        cross_dots = np.ascontiguousarray(cross_dots, dtype=np.float64)
        pair_norms.setflags(write=False)
        cross_dots.setflags(write=False)
        self._cross_dots = cross_dots
        self._pair_norms = pair_norms

    @property
    def pair_norms(self) -> np.ndarray:
        self.build_caches()
        return self._pair_norms

    @property
    def cross_dots(self) -> np.ndarray:
        self.build_caches()
        return self._cross_dots

    def save_cache(self, path: Union[str, Path]) -> None:
        """写出ZSPC缓存文件"""
        n_o, n_s = self.shape
        with open(path, 'wb') as f:
            write_header(f, CACHE_MAGIC, (n_o, n_s))
            write_f32_block(f, self.pair_norms)
            write_f32_block(f, self.cross_dots)
            write_trailer(f, self._cache_flags())

    def load_cache(self, path: Union[str, Path]) -> None:
        """读取ZSPC缓存文件

        Raises:
            InternalError: 缓存尺寸与向量表不一致，或求和前归一化设置不同
        """
        path = str(path)
        with open(path, 'rb') as f:
            n_o, n_s = read_header(f, path, CACHE_MAGIC, 2)
            if (n_o, n_s) != self.shape:
                raise InternalError(f"缓存 {path} 尺寸 {(n_o, n_s)} 与组合空间 {self.shape} 不一致")
            pair_norms = read_f32_block(f, path, n_o, n_s)
            cross_dots = read_f32_block(f, path, n_o, n_s)
            flags = read_trailer(f, path)
        if flags != self._cache_flags():
            raise InternalError(
                f"缓存 {path} 的求和前归一化设置为 {bool(flags & CACHE_FLAG_NORMALIZED)}，"
                f"与当前设置 {self.normalize_before_sum} 不一致，请删除缓存后重建")
        with self._cache_lock:
            self._install_caches(pair_norms, cross_dots)

    def _cache_flags(self) -> int:
        return CACHE_FLAG_NORMALIZED if self.normalize_before_sum else 0

    # ------------------------------------------------------------------
    # 单个组合
    # ------------------------------------------------------------------

    def check_ref(self, c: CompositionRef) -> None:
        n_o, n_s = self.shape
        if not (0 <= c.object_id < n_o and 0 <= c.scene_id < n_s):
            raise ArgumentError(f"组合 {c.as_tuple()} 超出空间 {self.shape}")

    def composition_embedding(self, c: CompositionRef) -> np.ndarray:
        """组合的表示：物体与场景原始向量逐元素相加"""
        self.check_ref(c)
        return self._objects[c.object_id] + self._scenes[c.scene_id]

    def pair_norm(self, c: CompositionRef) -> float:
        self.check_ref(c)
        return float(self.pair_norms[c.object_id, c.scene_id])

    def composition_action_similarity(self, c: CompositionRef, phi_a: np.ndarray) -> float:
        """组合与动作的余弦相似度（分解形式）

        (⟨φ_o,φ_a⟩ + ⟨φ_s,φ_a⟩) / (‖φ_o+φ_s‖·‖φ_a‖)，范数为0时返回0并计数。
        """
        phi_a = self._check_action(phi_a)
        norm = self.pair_norm(c) * float(np.linalg.norm(phi_a))
        if norm == 0.0:
            self.degeneracy.record()
            return 0.0
        dot = float(self._objects[c.object_id] @ phi_a) + float(self._scenes[c.scene_id] @ phi_a)
        return min(1.0, max(-1.0, dot / norm))

    def composition_pair_similarity(self, c1: CompositionRef, c2: CompositionRef) -> float:
        """两个组合之间的余弦相似度，由四个交叉点积与两个组合范数得到"""
        n1, n2 = self.pair_norm(c1), self.pair_norm(c2)
        if n1 == 0.0 or n2 == 0.0:
            self.degeneracy.record()
            return 0.0
        if c1 == c2:
            return 1.0
        o1, s1 = self._objects[c1.object_id], self._scenes[c1.scene_id]
        o2, s2 = self._objects[c2.object_id], self._scenes[c2.scene_id]
        dot = float(o1 @ o2) + float(o1 @ s2) + float(s1 @ o2) + float(s1 @ s2)
        return min(1.0, max(-1.0, dot / (n1 * n2)))

    def composition_weight(self, c: CompositionRef) -> float:
        """组合权重：物体与场景向量的余弦相似度"""
        self.check_ref(c)
        denom = float(self._object_norms[c.object_id]) * float(self._scene_norms[c.scene_id])
        if denom == 0.0:
            self.degeneracy.record()
            return 0.0
        value = float(self.cross_dots[c.object_id, c.scene_id]) / denom
        return min(1.0, max(-1.0, value))

    # ------------------------------------------------------------------
    # 全空间流式打分
    # ------------------------------------------------------------------

    def block_rows(self) -> int:
        """每块包含的物体行数"""
        return max(1, BLOCK_ELEMENTS // max(1, self.shape[1]))

    def iter_similarity_blocks(self, phi_a: np.ndarray) -> Iterator[Tuple[int, np.ndarray]]:
        """按物体行分块输出与动作的相似度

        每个动作只计算一次 ⟨φ_o,φ_a⟩ 与 ⟨φ_s,φ_a⟩，之后每个组合只需O(1)。
        被排除的自组合以 -inf 表示。

        Yields:
            (起始物体id, rows×|S| 相似度块)
        """
        phi_a = self._check_action(phi_a)
        n_o, n_s = self.shape
        pair_norms = self.pair_norms
        object_dots = self._objects @ phi_a
        scene_dots = self._scenes @ phi_a
        action_norm = float(np.linalg.norm(phi_a))
        step = self.block_rows()

        for start in range(0, n_o, step):
            end = min(n_o, start + step)
            denom = pair_norms[start:end] * action_norm
            degenerate = denom == 0.0
            numer = object_dots[start:end, None] + scene_dots[None, :]
            with np.errstate(divide='ignore', invalid='ignore'):
                sims = np.where(degenerate, 0.0, numer / np.where(degenerate, 1.0, denom))
            np.clip(sims, -1.0, 1.0, out=sims)
            if degenerate.any():
                self.degeneracy.record(int(degenerate.sum()))
            self._mask_self_pairs(sims, start, end)
            yield start, sims

    def weight_block(self, start: int, end: int) -> np.ndarray:
        """物体行 [start, end) 的组合权重块"""
        denom = self._object_norms[start:end, None] * self._scene_norms[None, :]
        degenerate = denom == 0.0
        with np.errstate(divide='ignore', invalid='ignore'):
            weights = np.where(degenerate, 0.0, self.cross_dots[start:end] / np.where(degenerate, 1.0, denom))
        return np.clip(weights, -1.0, 1.0)

    def iter_scores(self, phi_a: np.ndarray) -> Iterator[Tuple[CompositionRef, float]]:
        """按行优先顺序逐个输出 (组合, 相似度)，跳过被排除的组合"""
        for start, sims in self.iter_similarity_blocks(phi_a):
            for r, row in enumerate(sims):
                object_id = start + r
                for scene_id, value in enumerate(row):
                    if value == -np.inf:
                        continue
                    yield CompositionRef(object_id, scene_id), float(value)

    def score_all_compositions(self, phi_a: np.ndarray,
                               sink: Callable[[CompositionRef, float], None]) -> int:
        """将全部组合的相似度按行优先顺序推送给sink

        Returns:
            推送的组合数
        """
        if self._objects.shape[1] != np.asarray(phi_a).shape[-1]:
            raise InternalError(f"动作向量维度与组合空间维度 {self.dimension} 不一致")
        emitted = 0
        for ref, value in self.iter_scores(phi_a):
            sink(ref, value)
            emitted += 1
        return emitted

    def similarities_for(self, object_ids: np.ndarray, scene_ids: np.ndarray,
                         phi_a: np.ndarray) -> np.ndarray:
        """指定组合与动作的相似度（分解形式，向量化）"""
        phi_a = self._check_action(phi_a)
        dots = self._objects[object_ids] @ phi_a + self._scenes[scene_ids] @ phi_a
        denom = self.pair_norms[object_ids, scene_ids] * float(np.linalg.norm(phi_a))
        degenerate = denom == 0.0
        with np.errstate(divide='ignore', invalid='ignore'):
            sims = np.where(degenerate, 0.0, dots / np.where(degenerate, 1.0, denom))
        return np.clip(sims, -1.0, 1.0)

    def weights_for(self, object_ids: np.ndarray, scene_ids: np.ndarray) -> np.ndarray:
        """指定组合的权重 cos(φ_o, φ_s)"""
        denom = self._object_norms[object_ids] * self._scene_norms[scene_ids]
        degenerate = denom == 0.0
        with np.errstate(divide='ignore', invalid='ignore'):
            weights = np.where(degenerate, 0.0, self.cross_dots[object_ids, scene_ids] / np.where(degenerate, 1.0, denom))
        return np.clip(weights, -1.0, 1.0)

    def is_excluded(self, object_id: int, scene_id: int) -> bool:
        return self.exclude_self_pairs and object_id == scene_id

    def _mask_self_pairs(self, block: np.ndarray, start: int, end: int) -> None:
        if not self.exclude_self_pairs:
            return
        n_s = self.shape[1]
        rows = np.arange(start, end)
        rows = rows[rows < n_s]
        block[rows - start, rows] = -np.inf

    def _check_action(self, phi_a: np.ndarray) -> np.ndarray:
        phi_a = np.asarray(phi_a, dtype=np.float64)
        if phi_a.shape != (self.dimension,):
            raise InternalError(f"动作向量形状 {phi_a.shape} 与组合空间维度 {self.dimension} 不一致")
        if not np.all(np.isfinite(phi_a)):
            raise ArgumentError("动作向量包含非有限值")
        return phi_a

    # ------------------------------------------------------------------
    # 候选池
    # ------------------------------------------------------------------

    def pool(self, object_ids: Sequence[int], scene_ids: Sequence[int]) -> 'CompositionPool':
        """为一组候选组合建立批量相似度视图"""
        return CompositionPool(self, np.asarray(object_ids, dtype=np.int64),
                               np.asarray(scene_ids, dtype=np.int64))


class CompositionPool:
    """候选组合集合，批量计算它们与某个组合的相似度"""

    def __init__(self, space: CompositionSpace, object_ids: np.ndarray, scene_ids: np.ndarray):
        if object_ids.shape != scene_ids.shape:
            raise ArgumentError("候选池的物体id与场景id数量不一致")
        self.space = space
        self.object_ids = object_ids
        self.scene_ids = scene_ids
        self._unique_objects, self._object_inverse = np.unique(object_ids, return_inverse=True)
        self._unique_scenes, self._scene_inverse = np.unique(scene_ids, return_inverse=True)
        self._object_rows = space._objects[self._unique_objects]
        self._scene_rows = space._scenes[self._unique_scenes]
        self.norms = space.pair_norms[object_ids, scene_ids]

    def __len__(self) -> int:
        return int(self.object_ids.shape[0])

    def similarities_to(self, index: int) -> np.ndarray:
        """池中每个组合与第index个组合的余弦相似度"""
        o, s = int(self.object_ids[index]), int(self.scene_ids[index])
        w = self.space._objects[o] + self.space._scenes[s]
        dots = (self._object_rows @ w)[self._object_inverse] + (self._scene_rows @ w)[self._scene_inverse]
        denom = self.norms * self.norms[index]
        degenerate = denom == 0.0
        if degenerate.any():
            self.space.degeneracy.record(int(degenerate.sum()))
        with np.errstate(divide='ignore', invalid='ignore'):
            sims = np.where(degenerate, 0.0, dots / np.where(degenerate, 1.0, denom))
        np.clip(sims, -1.0, 1.0, out=sims)
        if denom[index] != 0.0:
            sims[index] = 1.0
        return sims
