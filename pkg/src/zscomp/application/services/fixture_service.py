"""
应用层 - 合成数据生成服务

生成带有预置结构的小规模实例：
动作a的"真"物体为 (a//2) mod |O|，"真"场景为 ((a+1)//2) mod |S|，
相邻动作两两共享物体或场景，只有物体与场景的组合才能唯一确定动作。
真物体/场景的向量偏向对应动作的向量，其概率在该动作的视频中被抬高。
生成后在落盘文件上复核：组合方法的准确率必须严格高于两种单一来源基线，
否则换下一个子种子重新生成。
"""
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from ...domain.embedding.impl.word2vec_text import write_word2vec_text
from ...domain.embedding.vocabulary import SourceKind, Vocabulary
from ...domain.evaluation.ground_truth import GroundTruth
from ...domain.exceptions import ConfigurationError, FixtureGenerationError
from ...domain.inference.scores import Method
from ...domain.probability.matrix import ProbabilityMatrix
from ...infrastructure.exporters.json_report import write_json
from ...infrastructure.repositories.ground_truth_repository import write_ground_truth
from ...infrastructure.repositories.probability_repository import write_probability_csv
from ..dto.run_config import RunConfig
from .evaluation_service import EvaluationAppService
from .experiment_context import ExperimentContext

logger = logging.getLogger(__name__)

FIXTURE_FILES = {
    'object_vocab': "objects.txt",
    'scene_vocab': "scenes.txt",
    'action_vocab': "actions.txt",
    'object_embeddings': "object_embeddings.txt",
    'scene_embeddings': "scene_embeddings.txt",
    'action_embeddings': "action_embeddings.txt",
    'object_probabilities': "object_probabilities.csv",
    'scene_probabilities': "scene_probabilities.csv",
    'ground_truth': "ground_truth.csv",
}
CONFIG_FILE = "config.json"

# 小规模实例使用的k值
FIXTURE_SETTINGS = {
    'k_object': 3,
    'k_scene': 2,
    'k_concatenation': 3,
    'k_composition': 10,
    'mmr_lambda': 0.75,
}

CHECKED_METHODS = (Method.COMPOSITIONS, Method.OBJECT_ONLY, Method.SCENE_ONLY)


@dataclass(frozen=True)
class FixtureSpec:
    """合成实例规模"""
    num_objects: int = 20
    num_scenes: int = 15
    num_actions: int = 10
    num_videos: int = 50
    dimension: int = 16
    seed: int = 0
    noise: float = 0.3
    boost: float = 4.0
    max_attempts: int = 20

    def __post_init__(self):
        for name in ("num_objects", "num_scenes", "num_actions", "num_videos",
                     "dimension", "max_attempts"):
            if getattr(self, name) < 1:
                raise ConfigurationError(name, f"必须为正整数，实际为 {getattr(self, name)}")
        if self.noise < 0:
            raise ConfigurationError("noise", "必须非负")
        if self.seed < 0:
            raise ConfigurationError("seed", "必须非负")

    def true_object(self, action_id: int) -> int:
        return (action_id // 2) % self.num_objects

    def true_scene(self, action_id: int) -> int:
        return ((action_id + 1) // 2) % self.num_scenes


@dataclass
class PlantedInstance:
    """内存中的合成实例"""
    object_vocab: Vocabulary
    scene_vocab: Vocabulary
    action_vocab: Vocabulary
    object_vectors: np.ndarray
    scene_vectors: np.ndarray
    action_vectors: np.ndarray
    object_probabilities: ProbabilityMatrix
    scene_probabilities: ProbabilityMatrix
    truth: GroundTruth
    accuracies: Dict[str, float] = field(default_factory=dict)


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _planted_vectors(rng: np.random.Generator, count: int, targets: List[int],
                     action_vectors: np.ndarray, noise: float) -> np.ndarray:
    """被某些动作选为"真"标签的向量取这些动作向量的均值加噪声，其余随机"""
    d = action_vectors.shape[1]
    vectors = rng.normal(size=(count, d))
    for label_id in range(count):
        owners = [a for a, t in enumerate(targets) if t == label_id]
        if owners:
            vectors[label_id] = action_vectors[owners].mean(axis=0) + noise * rng.normal(size=d)
    return vectors


def generate_planted_instance(spec: FixtureSpec, attempt: int = 0) -> PlantedInstance:
    """由 (seed, attempt) 确定地生成一个实例"""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([spec.seed, attempt])))
    objects = Vocabulary.create([f"obj{i:04d}" for i in range(spec.num_objects)], SourceKind.OBJECTS)
    scenes = Vocabulary.create([f"scn{i:04d}" for i in range(spec.num_scenes)], SourceKind.SCENES)
    actions = Vocabulary.create([f"act{i:04d}" for i in range(spec.num_actions)], SourceKind.ACTIONS)

    action_vectors = rng.normal(size=(spec.num_actions, spec.dimension))
    object_targets = [spec.true_object(a) for a in range(spec.num_actions)]
    scene_targets = [spec.true_scene(a) for a in range(spec.num_actions)]
    object_vectors = _planted_vectors(rng, spec.num_objects, object_targets, action_vectors, spec.noise)
    scene_vectors = _planted_vectors(rng, spec.num_scenes, scene_targets, action_vectors, spec.noise)

    video_ids = [f"vid{i:05d}" for i in range(spec.num_videos)]
    video_actions = [i % spec.num_actions for i in range(spec.num_videos)]
    object_logits = rng.normal(size=(spec.num_videos, spec.num_objects))
    scene_logits = rng.normal(size=(spec.num_videos, spec.num_scenes))
    for i, a in enumerate(video_actions):
        object_logits[i, object_targets[a]] += spec.boost
        scene_logits[i, scene_targets[a]] += spec.boost

    return PlantedInstance(
        object_vocab=objects,
        scene_vocab=scenes,
        action_vocab=actions,
        object_vectors=object_vectors,
        scene_vectors=scene_vectors,
        action_vectors=action_vectors,
        object_probabilities=ProbabilityMatrix(video_ids, objects, _softmax(object_logits)),
        scene_probabilities=ProbabilityMatrix(video_ids, scenes, _softmax(scene_logits)),
        truth=GroundTruth(dict(zip(video_ids, video_actions)), actions),
    )


class FixtureAppService:
    """fixtures命令"""

    def __init__(self, spec: FixtureSpec, output_dir: str, threads: int = 1):
        self.spec = spec
        self.output_dir = output_dir
        self.threads = threads

    def write_instance(self, instance: PlantedInstance) -> str:
        """写出实例文件与可直接使用的config.json，返回配置路径"""
        os.makedirs(self.output_dir, exist_ok=True)
        path = {name: os.path.join(self.output_dir, f) for name, f in FIXTURE_FILES.items()}
        instance.object_vocab.to_file(path['object_vocab'])
        instance.scene_vocab.to_file(path['scene_vocab'])
        instance.action_vocab.to_file(path['action_vocab'])
        write_word2vec_text(path['object_embeddings'], instance.object_vocab.labels,
                            instance.object_vectors)
        write_word2vec_text(path['scene_embeddings'], instance.scene_vocab.labels,
                            instance.scene_vectors)
        write_word2vec_text(path['action_embeddings'], instance.action_vocab.labels,
                            instance.action_vectors)
        write_probability_csv(path['object_probabilities'], instance.object_probabilities)
        write_probability_csv(path['scene_probabilities'], instance.scene_probabilities)
        write_ground_truth(path['ground_truth'], instance.truth)

        config = dict(FIXTURE_FILES)
        config.update(FIXTURE_SETTINGS)
        config.update({'seed': self.spec.seed, 'method': 'compositions', 'output_dir': 'output'})
        config_path = os.path.join(self.output_dir, CONFIG_FILE)
        write_json(config_path, config)
        return config_path

    def check_ordering(self, config_path: str) -> Dict[str, float]:
        """在落盘文件上评估三种方法的准确率"""
        config = RunConfig.from_json_file(config_path)
        service = EvaluationAppService(ExperimentContext(config, threads=self.threads))
        return service.accuracies_by_method(CHECKED_METHODS)

    def generate(self) -> Dict[str, object]:
        """生成实例，直到组合方法的准确率严格高于两种基线

        Raises:
            FixtureGenerationError: 超过最大尝试次数
        """
        for attempt in range(self.spec.max_attempts):
            instance = generate_planted_instance(self.spec, attempt)
            config_path = self.write_instance(instance)
            if self.spec.num_actions < 2:
                return self._summary(config_path, attempt, {})
            accuracies = self.check_ordering(config_path)
            comp = accuracies[Method.COMPOSITIONS.value]
            if comp > accuracies[Method.OBJECT_ONLY.value] and comp > accuracies[Method.SCENE_ONLY.value]:
                return self._summary(config_path, attempt, accuracies)
            logger.warning(f"第 {attempt} 次生成不满足组合优于基线 ({accuracies})，重新采样")
        raise FixtureGenerationError(
            f"{self.spec.max_attempts} 次尝试后仍未生成满足条件的实例 (seed={self.spec.seed})")

    def _summary(self, config_path: str, attempt: int,
                 accuracies: Dict[str, float]) -> Dict[str, object]:
        logger.info(f"✅ 合成实例已写出到 {self.output_dir} (第 {attempt} 次尝试)")
        return {
            'config': config_path,
            'attempt': attempt,
            'accuracies': accuracies,
            'files': sorted(FIXTURE_FILES.values()),
        }
