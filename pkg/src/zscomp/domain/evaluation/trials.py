"""
随机动作子集试验

每次试验从固定种子派生的独立随机流中无放回抽取动作子集，
同一种子下所有方法共用相同的子集（配对比较）。
"""
import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence

import numpy as np

from ..exceptions import ArgumentError, DataError

logger = logging.getLogger(__name__)

DEFAULT_NUM_TRIALS = 10

# 返回 方法名 → 准确率；子集内没有视频时准确率为None
SubsetEvaluator = Callable[[np.ndarray], Mapping[str, Optional[float]]]


def subset_hash(action_ids: Sequence[int]) -> str:
    """动作子集的稳定哈希（排序后的id的sha256前16位）"""
    text = ",".join(str(int(a)) for a in sorted(int(a) for a in action_ids))
    return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]


def sample_subsets(num_actions: int, subset_size: int, num_trials: int,
                   seed: int) -> List[np.ndarray]:
    """为每次试验抽取动作子集

    第i次试验使用 SeedSequence(seed) 派生的第i个子流（PCG64），
    结果只由 (seed, subset_size, num_trials) 决定。

    Returns:
        每次试验的升序动作id数组
    """
    if num_trials < 1:
        raise ArgumentError(f"试验次数必须为正整数，实际为 {num_trials}")
    if not 1 <= subset_size <= num_actions:
        raise ArgumentError(f"子集大小 {subset_size} 必须在 [1, {num_actions}] 内")
    streams = np.random.SeedSequence(int(seed)).spawn(num_trials)
    subsets = []
    for stream in streams:
        rng = np.random.Generator(np.random.PCG64(stream))
        chosen = rng.choice(num_actions, size=subset_size, replace=False)
        subsets.append(np.sort(chosen.astype(np.int64)))
    return subsets


@dataclass(frozen=True)
class TrialReport:
    """一种方法在多次子集试验上的结果"""
    method: str
    subset_size: int
    num_trials: int
    seed: int
    per_trial_accuracy: List[float]
    mean: float
    std: float
    subset_hashes: List[str] = field(default_factory=list)
    undefined_trials: List[int] = field(default_factory=list)

    @classmethod
    def summarize(cls, method: str, subset_size: int, seed: int,
                  accuracies: Sequence[Optional[float]],
                  hashes: Sequence[str]) -> 'TrialReport':
        """汇总各次试验，未定义的试验不参与均值与（总体）标准差"""
        defined = [float(a) for a in accuracies if a is not None]
        undefined = [i for i, a in enumerate(accuracies) if a is None]
        if not defined:
            raise DataError(f"方法 {method} 的所有试验均没有可评估的视频")
        values = np.array(defined, dtype=np.float64)
        if values.min() == values.max():
            mean, std = float(values[0]), 0.0
        else:
            mean, std = float(values.mean()), float(values.std(ddof=0))
        return cls(
            method=method,
            subset_size=subset_size,
            num_trials=len(accuracies),
            seed=int(seed),
            per_trial_accuracy=defined,
            mean=mean,
            std=std,
            subset_hashes=list(hashes),
            undefined_trials=undefined,
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            'method': self.method,
            'subset_size': self.subset_size,
            'num_trials': self.num_trials,
            'seed': self.seed,
            'per_trial_accuracy': list(self.per_trial_accuracy),
            'mean': self.mean,
            'std': self.std,
            'std_kind': 'population',
            'subset_hashes': list(self.subset_hashes),
            'undefined_trials': list(self.undefined_trials),
        }


def run_subset_trials(evaluate: SubsetEvaluator,
                      methods: Sequence[str],
                      num_actions: int,
                      subset_size: int,
                      num_trials: int = DEFAULT_NUM_TRIALS,
                      seed: int = 0,
                      threads: int = 1) -> Dict[str, TrialReport]:
    """运行随机子集试验

    Args:
        evaluate: 对给定动作子集重新选择并推理，返回各方法的准确率
        methods: 要汇总的方法名
        num_actions: 动作总数
        subset_size: 每次试验的动作数
        num_trials: 试验次数
        seed: 随机种子
        threads: 并行线程数，结果按试验下标收集

    Returns:
        方法名 → 试验报告
    """
    subsets = sample_subsets(num_actions, subset_size, num_trials, seed)
    hashes = [subset_hash(s) for s in subsets]
    if threads > 1 and num_trials > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            outcomes = list(executor.map(evaluate, subsets))
    else:
        outcomes = [evaluate(s) for s in subsets]

    reports: Dict[str, TrialReport] = {}
    for method in methods:
        accuracies: List[Optional[float]] = []
        for trial, outcome in enumerate(outcomes):
            if method not in outcome:
                raise ArgumentError(f"试验 {trial} 缺少方法 {method} 的结果")
            value = outcome[method]
            if value is None:
                logger.warning(f"试验 {trial}（子集 {hashes[trial]}）没有匹配的视频，已排除")
            accuracies.append(value)
        reports[method] = TrialReport.summarize(method, subset_size, seed, accuracies, hashes)
    return reports
