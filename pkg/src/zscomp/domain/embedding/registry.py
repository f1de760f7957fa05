"""向量表加载器注册装饰器和注册表"""
from typing import Dict, Optional, Type

from .base import BaseTableLoader


class LoaderConfig:
    """加载器配置基类"""

    def __init__(self, encoding: str = "utf-8", **kwargs):
        """初始化配置

        Args:
            encoding: 文本编码
            **kwargs: 其他配置参数
        """
        self.encoding = encoding
        self.extra_config = kwargs


class LoaderRegistry:
    """加载器注册表"""
    _loaders: Dict[str, Type[BaseTableLoader]] = {}
    _configs: Dict[str, Type[LoaderConfig]] = {}

    @classmethod
    def register(cls, name: str, loader_class: Type[BaseTableLoader],
                 config_class: Type[LoaderConfig]) -> None:
        """注册加载器

        Args:
            name: 格式名称
            loader_class: 加载器类
            config_class: 配置类
        """
        cls._loaders[name] = loader_class
        cls._configs[name] = config_class

    @classmethod
    def get_loader_class(cls, name: str) -> Optional[Type[BaseTableLoader]]:
        return cls._loaders.get(name)

    @classmethod
    def get_config_class(cls, name: str) -> Optional[Type[LoaderConfig]]:
        return cls._configs.get(name)

    @classmethod
    def list_formats(cls) -> Dict[str, Type[BaseTableLoader]]:
        """列出所有注册的格式"""
        return cls._loaders.copy()


def register_loader(name: str, config_class: Type[LoaderConfig] = LoaderConfig):
    """加载器注册装饰器

    Args:
        name: 格式名称
        config_class: 配置类

    Returns:
        装饰器函数
    """
    def decorator(loader_class):
        LoaderRegistry.register(name, loader_class, config_class)
        return loader_class
    return decorator
