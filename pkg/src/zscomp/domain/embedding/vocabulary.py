"""
词表值对象
"""
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Tuple, Union

from ..exceptions import ArgumentError, LookupFailedError


class SourceKind(Enum):
    """标签来源枚举"""
    OBJECTS = "objects"
    SCENES = "scenes"
    ACTIONS = "actions"
    GENERIC = "generic"


@dataclass(frozen=True)
class Vocabulary:
    """有序标签列表，id为0起始的下标"""
    source_kind: SourceKind
    labels: Tuple[str, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(label.strip() for label in self.labels)
        index: Dict[str, int] = {}
        for i, label in enumerate(labels):
            if not label:
                raise ArgumentError(f"词表第 {i} 项为空标签")
            if label in index:
                raise ArgumentError(f"词表中存在重复标签: '{label}'")
            index[label] = i
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, '_index', index)

    @classmethod
    def create(cls, labels: Iterable[str],
               source_kind: SourceKind = SourceKind.GENERIC) -> 'Vocabulary':
        """从标签序列创建词表"""
        return cls(source_kind=source_kind, labels=tuple(labels))

    @classmethod
    def from_file(cls, path: Union[str, Path],
                  source_kind: SourceKind = SourceKind.GENERIC) -> 'Vocabulary':
        """读取词表文件

        每行一个标签，'#'开头的行为注释，空行忽略。

        Args:
            path: 词表文件路径
            source_kind: 标签来源

        Returns:
            词表
        """
        labels: List[str] = []
        with open(path, 'r', encoding='utf-8') as f:
            for line in f:
                stripped = line.strip()
                if not stripped or stripped.startswith('#'):
                    continue
                labels.append(stripped)
        return cls(source_kind=source_kind, labels=tuple(labels))

    def to_file(self, path: Union[str, Path]) -> None:
        """写出词表文件"""
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            for label in self.labels:
                f.write(label + '\n')

    def id_of(self, label: str) -> int:
        """获取标签id"""
        try:
            return self._index[label.strip()]
        except KeyError:
            raise LookupFailedError("标签", label) from None

    def label_of(self, label_id: int) -> str:
        """获取id对应的标签"""
        if not 0 <= label_id < len(self.labels):
            raise ArgumentError(f"标签id越界: {label_id}")
        return self.labels[label_id]

    def subset(self, label_ids: Iterable[int]) -> 'Vocabulary':
        """按id顺序取子词表（id重新编号）"""
        return Vocabulary(self.source_kind,
                          tuple(self.labels[i] for i in label_ids))

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: object) -> bool:
        return isinstance(label, str) and label.strip() in self._index

    def __iter__(self):
        return iter(self.labels)
