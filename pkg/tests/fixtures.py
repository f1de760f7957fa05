"""
测试用的小规模随机实例
"""
from dataclasses import dataclass
from typing import List

import numpy as np

from zscomp.domain.embedding.table import EmbeddingTable
from zscomp.domain.embedding.vocabulary import SourceKind, Vocabulary
from zscomp.domain.evaluation.ground_truth import GroundTruth
from zscomp.domain.probability.matrix import ProbabilityMatrix


def make_vocab(prefix: str, n: int, kind: SourceKind = SourceKind.GENERIC) -> Vocabulary:
    return Vocabulary.create([f"{prefix}{i:03d}" for i in range(n)], kind)


def random_table(rng: np.random.Generator, prefix: str, n: int, d: int,
                 kind: SourceKind = SourceKind.GENERIC) -> EmbeddingTable:
    return EmbeddingTable(make_vocab(prefix, n, kind), rng.normal(size=(n, d)))


def random_matrix(rng: np.random.Generator, video_ids: List[str],
                  vocab: Vocabulary) -> ProbabilityMatrix:
    values = rng.dirichlet(np.ones(len(vocab)), size=len(video_ids))
    return ProbabilityMatrix(video_ids, vocab, values)


@dataclass
class Instance:
    objects: EmbeddingTable
    scenes: EmbeddingTable
    actions: EmbeddingTable
    object_probs: ProbabilityMatrix
    scene_probs: ProbabilityMatrix
    truth: GroundTruth


def random_instance(seed: int = 0, n_objects: int = 20, n_scenes: int = 15,
                    n_actions: int = 10, n_videos: int = 50, d: int = 16) -> Instance:
    """随机实例，真实标签按视频下标轮流分配"""
    rng = np.random.default_rng(seed)
    objects = random_table(rng, "obj", n_objects, d, SourceKind.OBJECTS)
    scenes = random_table(rng, "scn", n_scenes, d, SourceKind.SCENES)
    actions = random_table(rng, "act", n_actions, d, SourceKind.ACTIONS)
    video_ids = [f"vid{i:04d}" for i in range(n_videos)]
    truth = GroundTruth({v: i % n_actions for i, v in enumerate(video_ids)}, actions.vocab)
    return Instance(
        objects=objects,
        scenes=scenes,
        actions=actions,
        object_probs=random_matrix(rng, video_ids, objects.vocab),
        scene_probs=random_matrix(rng, video_ids, scenes.vocab),
        truth=truth,
    )


def naive_cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))
