"""
朴素参考实现

显式构造每个组合的向量，对全部组合完整排序，在整个候选池上做精确MMR，
逐项求和得到视频分数。只与主引擎共享向量表加载，不复用任何数值计算代码，
用于在小规模实例上核对主引擎的结果。
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from ..domain.embedding.table import EmbeddingTable
from ..domain.exceptions import ArgumentError, SizeGuardError

logger = logging.getLogger(__name__)

SIZE_LIMIT = 100_000

Candidate = Tuple[int, int]


@dataclass(frozen=True)
class OracleConfig:
    k: int = 250
    mmr_lambda: float = 0.75
    mode: str = "mmr"
    pool_size: Optional[Union[int, str]] = "full"
    weight_in_selection: bool = False
    weight_in_scoring: bool = False
    clip_similarities: bool = False
    normalize_before_sum: bool = False
    exclude_self_pairs: bool = False


@dataclass(frozen=True)
class OracleMember:
    object_id: int
    scene_id: int
    similarity: float
    selection_score: float
    weight: float


@dataclass
class OracleResult:
    selections: Dict[int, List[OracleMember]] = field(default_factory=dict)
    scores: Optional[np.ndarray] = None
    predictions: List[int] = field(default_factory=list)

    def selected_set(self, action_id: int) -> set:
        return {(m.object_id, m.scene_id) for m in self.selections[action_id]}


def _cos(u: np.ndarray, v: np.ndarray) -> float:
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def _unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    return v if n == 0.0 else v / n


class NaiveCompositionOracle:
    """参考实现"""

    def __init__(self, object_table: EmbeddingTable, scene_table: EmbeddingTable,
                 config: OracleConfig):
        size = len(object_table) * len(scene_table)
        if size > SIZE_LIMIT:
            raise SizeGuardError(size, SIZE_LIMIT)
        self.config = config
        objects = [object_table.vectors[i] for i in range(len(object_table))]
        scenes = [scene_table.vectors[j] for j in range(len(scene_table))]
        if config.normalize_before_sum:
            objects = [_unit(v) for v in objects]
            scenes = [_unit(v) for v in scenes]

        self.candidates: List[Candidate] = []
        self.embeddings: Dict[Candidate, np.ndarray] = {}
        self.weights: Dict[Candidate, float] = {}
        for o, phi_o in enumerate(objects):
            for s, phi_s in enumerate(scenes):
                if config.exclude_self_pairs and o == s:
                    continue
                self.candidates.append((o, s))
                self.embeddings[(o, s)] = phi_o + phi_s
                self.weights[(o, s)] = _cos(phi_o, phi_s)

    def ranked(self, phi_a: np.ndarray) -> List[Tuple[float, float, Candidate]]:
        """按相关性降序、(o,s)升序完整排序，返回 (相关性, 相似度, 组合)"""
        rows = []
        for c in self.candidates:
            sim = _cos(self.embeddings[c], phi_a)
            relevance = sim * self.weights[c] if self.config.weight_in_selection else sim
            rows.append((relevance, sim, c))
        rows.sort(key=lambda r: (-r[0], r[2]))
        return rows

    def select(self, phi_a: np.ndarray) -> List[OracleMember]:
        ranked = self.ranked(phi_a)
        if not ranked:
            raise ArgumentError("组合空间为空")
        cfg = self.config
        if cfg.mode == "plain":
            return [OracleMember(c[0], c[1], sim, rel, self.weights[c])
                    for rel, sim, c in ranked[:cfg.k]]

        if cfg.pool_size is None:
            pool_size = max(50 * cfg.k, 5000)
        elif cfg.pool_size == "full":
            pool_size = len(ranked)
        else:
            pool_size = int(cfg.pool_size)
        pool = ranked[:pool_size]
        lam = cfg.mmr_lambda

        rel0, sim0, c0 = pool[0]
        chosen = [OracleMember(c0[0], c0[1], sim0, rel0, self.weights[c0])]
        selected = [c0]
        remaining = pool[1:]
        while len(chosen) < min(cfg.k, len(pool)):
            best = None
            for rel, sim, c in remaining:
                redundancy = max(_cos(self.embeddings[c], self.embeddings[c2]) for c2 in selected)
                score = lam * rel - (1.0 - lam) * redundancy
                if best is None or score > best[0] or (score == best[0] and c < best[3]):
                    best = (score, rel, sim, c)
            score, rel, sim, c = best
            chosen.append(OracleMember(c[0], c[1], sim, score, self.weights[c]))
            selected.append(c)
            remaining = [r for r in remaining if r[2] != c]
        return chosen

    def score(self, objects: np.ndarray, scenes: np.ndarray,
              members: List[OracleMember]) -> np.ndarray:
        """逐视频、逐成员直接求和"""
        out = np.zeros(objects.shape[0])
        for v in range(objects.shape[0]):
            total = 0.0
            for m in members:
                coefficient = max(m.similarity, 0.0) if self.config.clip_similarities else m.similarity
                if self.config.weight_in_scoring:
                    coefficient *= m.weight
                total += objects[v, m.object_id] * scenes[v, m.scene_id] * coefficient
            out[v] = total
        return out


def oracle_pipeline(object_table: EmbeddingTable, scene_table: EmbeddingTable,
                    action_table: EmbeddingTable, objects: np.ndarray, scenes: np.ndarray,
                    config: OracleConfig) -> OracleResult:
    """参考流水线：选择、打分与预测

    Args:
        object_table: 物体向量表
        scene_table: 场景向量表
        action_table: 动作向量表
        objects: |V|×|O| 物体概率
        scenes: |V|×|S| 场景概率（行顺序与objects一致）
        config: 参考实现配置

    Raises:
        SizeGuardError: 组合数超过 SIZE_LIMIT
    """
    oracle = NaiveCompositionOracle(object_table, scene_table, config)
    result = OracleResult()
    columns = []
    for a in range(len(action_table)):
        members = oracle.select(action_table.vectors[a])
        result.selections[a] = members
        columns.append(oracle.score(objects, scenes, members))
    result.scores = np.column_stack(columns) if columns else np.zeros((objects.shape[0], 0))
    result.predictions = [int(np.argmax(row)) for row in result.scores]
    logger.info(f"参考实现完成: {len(action_table)} 个动作, {objects.shape[0]} 个视频")
    return result
