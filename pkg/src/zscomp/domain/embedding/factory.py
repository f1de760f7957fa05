from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..exceptions import ArgumentError
from .base import BaseTableLoader, OOVPolicy
from .registry import LoaderConfig, LoaderRegistry
from .table import EmbeddingTable
from .vocabulary import Vocabulary


class TableLoaderFactory:
    """向量表加载器工厂类"""

    @staticmethod
    def create_loader(fmt: str,
                      config: Optional[Union[LoaderConfig, Dict[str, Any]]] = None,
                      **kwargs) -> BaseTableLoader:
        """创建加载器实例

        Args:
            fmt: 格式名称（如 'word2vec_text'）
            config: 配置对象或配置字典
            **kwargs: 额外的配置参数

        Returns:
            加载器实例

        Raises:
            ArgumentError: 当格式未注册或配置无效时
        """
        if fmt not in LoaderRegistry.list_formats():
            available = list(LoaderRegistry.list_formats().keys())
            raise ArgumentError(
                f"Format '{fmt}' is not registered. Available formats: {available}")

        loader_class = LoaderRegistry.get_loader_class(fmt)
        config_class = LoaderRegistry.get_config_class(fmt)
        if loader_class is None or config_class is None:
            raise ArgumentError(f"Failed to get classes for format '{fmt}'")

        if config is None:
            final_config = config_class(**kwargs)
        elif isinstance(config, dict):
            final_config = config_class(**{**config, **kwargs})
        elif isinstance(config, config_class):
            final_config = config
        else:
            raise ArgumentError(
                f"Config type mismatch. Expected {config_class.__name__}, "
                f"got {type(config).__name__}")

        return loader_class(final_config)

    @staticmethod
    def list_formats() -> List[str]:
        return list(LoaderRegistry.list_formats().keys())


def load_embedding_table(path: Union[str, Path],
                         fmt: str,
                         vocab: Vocabulary,
                         policy: OOVPolicy = OOVPolicy.FAIL) -> EmbeddingTable:
    """加载向量表的便捷函数

    Args:
        path: 文件路径
        fmt: 格式名称（word2vec_text | binary_table）
        vocab: 词表
        policy: 全部词缺失时的策略

    Returns:
        每个词表标签一行的Embedding表
    """
    loader = TableLoaderFactory.create_loader(fmt)
    raw = loader.read_token_index(path)
    return EmbeddingTable.from_raw(raw, vocab, policy)
