"""
领域异常定义
"""
from typing import Optional, Tuple


class DomainError(Exception):
    """领域层基础异常"""
    pass


class ArgumentError(DomainError, ValueError):
    """参数异常"""
    pass


class ConfigurationError(DomainError, ValueError):
    """配置异常（CLI退出码2）"""
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"配置项 {field} 无效: {message}")


class FormatError(DomainError):
    """文件格式异常"""
    def __init__(self, path: str, message: str, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = f"{path}:{line}" if line is not None else path
        super().__init__(f"格式错误 {location}: {message}")


class MissingLabelError(DomainError):
    """标签的所有词都不在词表中"""
    def __init__(self, label: str):
        self.label = label
        super().__init__(f"标签缺少向量表示: '{label}'")


class SchemaError(DomainError):
    """列与词表不一致"""
    def __init__(self, message: str, divergent_label: Optional[str] = None):
        self.divergent_label = divergent_label
        super().__init__(message)


class DataError(DomainError):
    """数据内容异常"""
    def __init__(self, message: str,
                 video_id: Optional[str] = None,
                 coordinates: Optional[Tuple[int, int]] = None):
        self.video_id = video_id
        self.coordinates = coordinates
        super().__init__(message)


class RowRejectedError(DataError):
    """概率行不满足行随机性"""
    def __init__(self, video_id: str, row_sum: float):
        self.row_sum = row_sum
        super().__init__(
            f"视频 {video_id} 的概率行之和为 {row_sum:.6f}，超出容差",
            video_id=video_id,
        )


class LookupFailedError(DomainError, KeyError):
    """查找失败"""
    def __init__(self, kind: str, identifier: str):
        self.kind = kind
        self.identifier = identifier
        super().__init__(f"{kind}未找到: {identifier}")

    def __str__(self) -> str:
        return self.args[0]


class SizeGuardError(DomainError):
    """实例规模超出参考实现上限"""
    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"组合空间规模 {size} 超过上限 {limit}")


class InternalError(DomainError):
    """内部一致性异常"""
    pass


class FixtureGenerationError(DomainError):
    """合成数据生成失败"""
    pass
