"""
选择领域服务：按相关性或最大边际相关性（MMR）为每个动作选出top-k
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..composition.space import CompositionRef, CompositionSpace
from ..embedding.base import DegeneracyCounter, EmbeddingUtils
from ..embedding.table import EmbeddingTable
from ..embedding.vocabulary import Vocabulary
from ..exceptions import ArgumentError
from .composition_set import ActionCompositionSet, SelectedComposition
from .config import SelectionConfig, SelectionMode
from .top_k import BoundedTopK

logger = logging.getLogger(__name__)


def _relevance_head(space: CompositionSpace, phi_a: np.ndarray, count: int,
                    weight_in_selection: bool) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """按相关性取组合空间的前count个

    Returns:
        (object_ids, scene_ids, 相关性, 原始相似度)，按相关性降序、字典序升序
    """
    if space.size == 0:
        raise ArgumentError("组合空间为空")
    n_s = space.shape[1]
    selector = BoundedTopK(count)
    for start, sims in space.iter_similarity_blocks(phi_a):
        if weight_in_selection:
            weights = space.weight_block(start, start + sims.shape[0])
            sims = np.where(sims == -np.inf, -np.inf, sims * weights)
        selector.offer_block(start * n_s, sims)
    if len(selector) == 0:
        raise ArgumentError("组合空间中没有可选的组合")
    flat, relevance = selector.result()
    object_ids, scene_ids = flat // n_s, flat % n_s
    if weight_in_selection:
        similarities = space.similarities_for(object_ids, scene_ids, phi_a)
    else:
        similarities = relevance
    return object_ids, scene_ids, relevance, similarities


def select_top_k_plain(space: CompositionSpace, phi_a: np.ndarray, k: int,
                       action_id: int = 0,
                       weight_in_selection: bool = False) -> ActionCompositionSet:
    """选出与动作最相似的k个组合

    Args:
        space: 组合空间
        phi_a: 动作向量
        k: 组合个数
        action_id: 动作id
        weight_in_selection: 是否按 s(c,a)·w(c) 排序

    Returns:
        按相似度降序（同分按字典序）排列的组合集合
    """
    if k < 1:
        raise ArgumentError(f"k必须为正整数，实际为 {k}")
    object_ids, scene_ids, relevance, similarities = _relevance_head(
        space, phi_a, k, weight_in_selection)
    weights = space.weights_for(object_ids, scene_ids)
    members = tuple(
        SelectedComposition(CompositionRef(int(o), int(s)), float(sim), float(rel), float(w))
        for o, s, sim, rel, w in zip(object_ids, scene_ids, similarities, relevance, weights)
    )
    config = SelectionConfig(k=k, mmr_lambda=1.0, pool_size=None,
                             mode=SelectionMode.PLAIN,
                             weight_in_selection=weight_in_selection)
    return ActionCompositionSet(action_id, members, config)


def select_top_k_mmr(space: CompositionSpace, phi_a: np.ndarray,
                     config: SelectionConfig, action_id: int = 0) -> ActionCompositionSet:
    """用最大边际相关性选出k个组合

    以最相关的组合为种子，之后每轮加入使
    λ·s(c',a) − (1−λ)·max_{c''∈已选} s(c',c'') 最大的候选，同分取字典序最小者。
    候选池为按相关性排序的前 pool_size 个组合。

    Args:
        space: 组合空间
        phi_a: 动作向量
        config: 选择配置
        action_id: 动作id

    Returns:
        按贪心加入顺序排列的组合集合
    """
    lam = float(config.mmr_lambda)
    pool_size = config.effective_pool_size(space.size)
    object_ids, scene_ids, relevance, similarities = _relevance_head(
        space, phi_a, max(pool_size, 1), config.weight_in_selection)
    pool = space.pool(object_ids, scene_ids)
    n_s = space.shape[1]
    flat = object_ids * n_s + scene_ids
    k = min(config.k, len(pool))

    chosen: List[int] = [0]
    scores: List[float] = [float(relevance[0])]
    available = np.ones(len(pool), dtype=bool)
    available[0] = False
    max_sim = pool.similarities_to(0)

    weighted_relevance = lam * relevance
    while len(chosen) < k:
        mmr = weighted_relevance - (1.0 - lam) * max_sim
        mmr = np.where(available, mmr, -np.inf)
        best = mmr.max()
        tied = np.flatnonzero(mmr == best)
        pick = int(tied[np.argmin(flat[tied])]) if tied.size > 1 else int(tied[0])
        chosen.append(pick)
        scores.append(float(best))
        available[pick] = False
        np.maximum(max_sim, pool.similarities_to(pick), out=max_sim)

    weights = space.weights_for(object_ids[chosen], scene_ids[chosen])
    members = tuple(
        SelectedComposition(CompositionRef(int(object_ids[i]), int(scene_ids[i])),
                            float(similarities[i]), score, float(w))
        for i, score, w in zip(chosen, scores, weights)
    )
    return ActionCompositionSet(action_id, members, config)


def select_top_k(space: CompositionSpace, phi_a: np.ndarray,
                 config: SelectionConfig, action_id: int = 0) -> ActionCompositionSet:
    """按配置的方式选择"""
    if config.mode is SelectionMode.PLAIN:
        result = select_top_k_plain(space, phi_a, config.k, action_id,
                                    config.weight_in_selection)
        return ActionCompositionSet(action_id, result.members, config)
    return select_top_k_mmr(space, phi_a, config, action_id)


def select_top_k_single(table: EmbeddingTable, vocab: Vocabulary,
                        phi_a: np.ndarray, k: int,
                        counter: Optional[DegeneracyCounter] = None) -> List[Tuple[int, float]]:
    """单一来源（物体或场景）标签的top-k

    Args:
        table: 向量表
        vocab: 词表
        phi_a: 动作向量
        k: 标签个数

    Returns:
        [(label_id, similarity)]，相似度降序，同分id升序
    """
    if k < 1:
        raise ArgumentError(f"k必须为正整数，实际为 {k}")
    if len(vocab) == 0:
        raise ArgumentError("词表为空")
    if len(vocab) != len(table):
        raise ArgumentError(f"词表大小 {len(vocab)} 与向量表大小 {len(table)} 不一致")
    sims = EmbeddingUtils.cosine_to_rows(table.vectors, phi_a, table.norms, counter)
    selector = BoundedTopK(k)
    selector.offer_block(0, sims)
    indices, values = selector.result()
    return [(int(i), float(v)) for i, v in zip(indices, values)]


def select_all_actions(space: CompositionSpace, action_table: EmbeddingTable,
                       config: SelectionConfig,
                       action_ids: Optional[Sequence[int]] = None,
                       threads: int = 1) -> List[ActionCompositionSet]:
    """为所有（或给定的）动作选择组合集合

    动作之间互不依赖，可并行；结果按动作顺序收集。

    Args:
        space: 组合空间
        action_table: 动作向量表
        config: 选择配置
        action_ids: 要选择的动作id，默认全部
        threads: 线程数

    Returns:
        与 action_ids 顺序一致的组合集合列表
    """
    if action_ids is None:
        action_ids = range(len(action_table))
    action_ids = [int(a) for a in action_ids]
    space.build_caches()

    def run(action_id: int) -> ActionCompositionSet:
        return select_top_k(space, action_table.vector(action_id), config, action_id)

    if threads > 1 and len(action_ids) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(run, action_ids))
    else:
        results = [run(a) for a in action_ids]
    space.degeneracy.warn_if_any()
    logger.info(f"已为 {len(results)} 个动作完成组合选择 (k={config.k}, 模式={config.mode.value})")
    return results
