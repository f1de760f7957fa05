"""
选择配置值对象
"""
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Union

from ..exceptions import ConfigurationError

DEFAULT_K_COMPOSITION = 250
DEFAULT_LAMBDA = 0.75
FULL_POOL = "full"


class SelectionMode(Enum):
    """选择方式"""
    PLAIN = "plain"
    MMR = "mmr"


@dataclass(frozen=True)
class SelectionConfig:
    """top-k选择配置值对象"""
    k: int = DEFAULT_K_COMPOSITION
    mmr_lambda: float = DEFAULT_LAMBDA
    pool_size: Optional[Union[int, str]] = None
    mode: SelectionMode = SelectionMode.MMR
    weight_in_selection: bool = False

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise ConfigurationError("k", f"必须为正整数，实际为 {self.k!r}")
        if not 0.0 <= float(self.mmr_lambda) <= 1.0:
            raise ConfigurationError("mmr_lambda", f"必须在[0,1]内，实际为 {self.mmr_lambda}")
        if isinstance(self.pool_size, str):
            if self.pool_size != FULL_POOL:
                raise ConfigurationError("pool_size", f"只能为正整数或 '{FULL_POOL}'")
        elif self.pool_size is not None:
            if self.pool_size < 1:
                raise ConfigurationError("pool_size", f"必须为正整数，实际为 {self.pool_size}")
            if self.pool_size < self.k:
                raise ConfigurationError(
                    "pool_size", f"候选池大小 {self.pool_size} 小于 k={self.k}")
        if not isinstance(self.mode, SelectionMode):
            object.__setattr__(self, 'mode', SelectionMode(self.mode))

    def effective_pool_size(self, space_size: int) -> int:
        """实际候选池大小：默认 max(50·k, 5000)，不超过组合空间大小"""
        if self.pool_size == FULL_POOL:
            return space_size
        if self.pool_size is None:
            return min(space_size, max(50 * self.k, 5000))
        return min(space_size, int(self.pool_size))

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典格式"""
        return {
            'k': self.k,
            'mmr_lambda': self.mmr_lambda,
            'pool_size': self.pool_size,
            'mode': self.mode.value,
            'weight_in_selection': self.weight_in_selection,
        }
