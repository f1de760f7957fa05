"""
运行配置DTO

JSON配置文件采用扁平结构，命令行选项可逐项覆盖。
"""
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Union

import orjson
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ...domain.embedding.base import OOVPolicy
from ...domain.exceptions import ConfigurationError
from ...domain.inference.scores import Method, WeightMode
from ...domain.selection.config import FULL_POOL, SelectionConfig, SelectionMode

EmbeddingFormat = Literal["word2vec_text", "binary_table"]
ProbabilityFormat = Literal["csv", "zspm_binary"]
MethodName = Literal[
    "compositions", "compositions_weighted_scoring", "compositions_weighted_selection",
    "object_only", "scene_only", "concatenation", "late_fusion",
]

PATH_FIELDS = (
    "object_embeddings", "scene_embeddings", "action_embeddings",
    "object_probabilities", "scene_probabilities",
    "object_vocab", "scene_vocab", "action_vocab",
    "ground_truth", "cache_path", "output_dir",
)


class RunConfig(BaseModel):
    """一次运行的完整配置"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    # 输入文件
    object_embeddings: Optional[str] = Field(None, description="物体向量表")
    scene_embeddings: Optional[str] = Field(None, description="场景向量表")
    action_embeddings: Optional[str] = Field(None, description="动作向量表")
    object_embedding_format: EmbeddingFormat = Field("word2vec_text", description="物体向量表格式")
    scene_embedding_format: EmbeddingFormat = Field("word2vec_text", description="场景向量表格式")
    action_embedding_format: EmbeddingFormat = Field("word2vec_text", description="动作向量表格式")
    object_probabilities: Optional[str] = Field(None, description="物体概率矩阵")
    scene_probabilities: Optional[str] = Field(None, description="场景概率矩阵")
    probability_format: ProbabilityFormat = Field("csv", description="概率矩阵格式")
    frame_level: bool = Field(False, description="概率CSV为逐帧格式，需要按视频聚合")
    object_vocab: Optional[str] = Field(None, description="物体词表")
    scene_vocab: Optional[str] = Field(None, description="场景词表")
    action_vocab: Optional[str] = Field(None, description="动作词表")
    ground_truth: Optional[str] = Field(None, description="真实标签CSV")
    cache_path: Optional[str] = Field(None, description="组合缓存文件（ZSPC）")
    output_dir: str = Field("output", description="输出目录")

    # 方法与超参数
    method: MethodName = Field("compositions", description="打分方法")
    weight_mode: Literal["none", "in_scoring", "in_selection"] = Field("none", description="组合权重位置")
    selection_mode: Literal["mmr", "plain"] = Field("mmr", description="组合选择方式")
    k_object: int = Field(100, ge=1, description="物体基线的top-k")
    k_scene: int = Field(5, ge=1, description="场景基线的top-k")
    k_concatenation: int = Field(100, ge=1, description="拼接基线的top-k")
    k_composition: int = Field(250, ge=1, description="每个动作的组合数")
    mmr_lambda: float = Field(0.75, ge=0.0, le=1.0, description="MMR的相关性权重λ")
    pool_size: Optional[Union[int, Literal["full"]]] = Field(None, description="MMR候选池大小")
    seed: int = Field(0, ge=0, lt=2 ** 64, description="随机种子")
    threads: int = Field(0, ge=0, description="线程数，0表示自动")

    # 开关
    renormalize: bool = Field(False, description="行和超差时重新归一化")
    normalize_before_sum: bool = Field(False, description="求和前对向量L2归一化")
    exclude_self_pairs: bool = Field(False, description="排除 object_id == scene_id 的组合")
    clip_similarities: bool = Field(False, description="打分时把负相似度截断为0")
    oov_policy: Literal["fail", "zero"] = Field("fail", description="标签完全缺失时的策略")

    # 评估
    subset_size: Optional[int] = Field(None, ge=1, description="每次试验的动作数")
    num_trials: int = Field(10, ge=1, description="试验次数")
    compare_method: MethodName = Field("object_only", description="逐动作对比的基线方法")
    ablation_subset_sizes: List[int] = Field(default_factory=list, description="消融实验的子集大小")
    sweep_lambdas: List[float] = Field(default_factory=lambda: [0.0, 0.25, 0.5, 0.75, 1.0])
    sweep_ks: List[int] = Field(default_factory=lambda: [250])

    @field_validator("pool_size")
    @classmethod
    def _check_pool_size(cls, value):
        if isinstance(value, int) and not isinstance(value, bool) and value < 1:
            raise ValueError("pool_size 必须为正整数或 'full'")
        return value

    @field_validator("sweep_lambdas")
    @classmethod
    def _check_sweep_lambdas(cls, value: List[float]) -> List[float]:
        for lam in value:
            if not 0.0 <= lam <= 1.0:
                raise ValueError(f"λ必须在[0,1]内，实际为 {lam}")
        return value

    @field_validator("ablation_subset_sizes", "sweep_ks")
    @classmethod
    def _check_positive(cls, value: List[int]) -> List[int]:
        if any(v < 1 for v in value):
            raise ValueError("必须全部为正整数")
        return value

    # ------------------------------------------------------------------
    # 构造
    # ------------------------------------------------------------------

    @classmethod
    def create(cls, data: Mapping[str, Any]) -> 'RunConfig':
        """校验并创建配置，校验失败转换为 ConfigurationError"""
        try:
            return cls.model_validate(dict(data))
        except ValidationError as e:
            raise configuration_error(e) from e

    @classmethod
    def from_json_file(cls, path: Union[str, Path]) -> 'RunConfig':
        """读取JSON配置文件，相对路径以配置文件所在目录为基准"""
        try:
            with open(path, 'rb') as f:
                data = orjson.loads(f.read())
        except OSError as e:
            raise ConfigurationError("config", f"无法读取配置文件 {path}: {e}") from e
        except orjson.JSONDecodeError as e:
            raise ConfigurationError("config", f"配置文件不是合法的JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigurationError("config", "配置文件顶层必须是对象")
        base = Path(path).resolve().parent
        for name in PATH_FIELDS:
            value = data.get(name)
            if isinstance(value, str) and value and not os.path.isabs(value):
                data[name] = str(base / value)
        return cls.create(data)

    def merged(self, overrides: Mapping[str, Any]) -> 'RunConfig':
        """用非None的覆盖项生成新配置"""
        data = self.model_dump()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig.create(data)

    # ------------------------------------------------------------------
    # 派生
    # ------------------------------------------------------------------

    @property
    def resolved_method(self) -> Method:
        return Method.resolve(Method(self.method), WeightMode(self.weight_mode))

    @property
    def oov(self) -> OOVPolicy:
        return OOVPolicy(self.oov_policy)

    def selection_config(self, k: Optional[int] = None,
                         mmr_lambda: Optional[float] = None,
                         method: Optional[Method] = None) -> SelectionConfig:
        """组合选择配置"""
        method = method or self.resolved_method
        try:
            return SelectionConfig(
                k=k if k is not None else self.k_composition,
                mmr_lambda=mmr_lambda if mmr_lambda is not None else self.mmr_lambda,
                pool_size=self.pool_size,
                mode=SelectionMode(self.selection_mode),
                weight_in_selection=method is Method.COMPOSITIONS_WEIGHTED_SELECTION,
            )
        except ValueError as e:
            if isinstance(e, ConfigurationError):
                raise
            raise ConfigurationError("selection_mode", str(e)) from e

    def require_paths(self, *names: str) -> None:
        """检查给定路径项已配置且存在

        Raises:
            ConfigurationError: 未配置或文件不存在（带字段名）
        """
        for name in names:
            value = getattr(self, name)
            if not value:
                raise ConfigurationError(name, "未配置")
            if not os.path.exists(value):
                raise ConfigurationError(name, f"文件不存在: {value}")

    def require_for(self, command: str, method: Optional[Method] = None) -> None:
        """按命令与方法检查所需输入"""
        method = method or self.resolved_method
        needed: List[str] = ["action_embeddings", "action_vocab"]
        if command == "select" or method.needs_objects:
            needed += ["object_embeddings", "object_vocab"]
        if command == "select" or method.needs_scenes:
            needed += ["scene_embeddings", "scene_vocab"]
        if command in ("classify", "evaluate", "ablate", "sweep"):
            if method.needs_objects:
                needed.append("object_probabilities")
            if method.needs_scenes:
                needed.append("scene_probabilities")
        if command in ("evaluate", "ablate", "sweep"):
            needed.append("ground_truth")
        if command in ("ablate", "oracle-check"):
            needed += ["object_embeddings", "object_vocab", "scene_embeddings", "scene_vocab",
                       "object_probabilities", "scene_probabilities"]
        self.require_paths(*dict.fromkeys(needed))

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()


def configuration_error(error: ValidationError) -> ConfigurationError:
    """将pydantic校验错误转换为带字段名的配置异常"""
    first = error.errors()[0]
    field = ".".join(str(part) for part in first.get("loc", ())) or "config"
    return ConfigurationError(field, first.get("msg", str(error)))
