"""
多样性参数扫描：λ × k 网格上的准确率
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence

from ..exceptions import ArgumentError

DEFAULT_SWEEP_LAMBDAS = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class SweepPoint:
    mmr_lambda: float
    k: int
    accuracy: float

    def to_dict(self) -> Dict[str, float]:
        return {'mmr_lambda': self.mmr_lambda, 'k': self.k, 'accuracy': self.accuracy}


def sweep_lambda(evaluate: Callable[[float, int], float],
                 lambdas: Sequence[float] = DEFAULT_SWEEP_LAMBDAS,
                 ks: Sequence[int] = (250,)) -> List[SweepPoint]:
    """按 λ 外层、k 内层的顺序评估网格中的每个点"""
    if not lambdas or not ks:
        raise ArgumentError("扫描网格不能为空")
    points: List[SweepPoint] = []
    for lam in lambdas:
        if not 0.0 <= lam <= 1.0:
            raise ArgumentError(f"λ必须在[0,1]内，实际为 {lam}")
        for k in ks:
            points.append(SweepPoint(float(lam), int(k), float(evaluate(float(lam), int(k)))))
    return points
