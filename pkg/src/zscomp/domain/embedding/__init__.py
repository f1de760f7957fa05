"""Embedding模块初始化

自动导入所有格式实现以触发注册装饰器
"""

# 导入加载器实现以触发自动注册
from .impl.word2vec_text import Word2VecTextLoader, write_word2vec_text
from .impl.binary_table import BinaryTableLoader, write_binary_table

from .base import (
    DegeneracyCounter, EmbeddingUtils, OOVPolicy, RawTable,
    cosine, embed_label, tokenize,
)
from .factory import TableLoaderFactory, load_embedding_table
from .registry import LoaderConfig, LoaderRegistry, register_loader
from .table import EmbeddingTable
from .vocabulary import SourceKind, Vocabulary

__all__ = [
    'BinaryTableLoader',
    'DegeneracyCounter',
    'EmbeddingTable',
    'EmbeddingUtils',
    'LoaderConfig',
    'LoaderRegistry',
    'OOVPolicy',
    'RawTable',
    'SourceKind',
    'TableLoaderFactory',
    'Vocabulary',
    'Word2VecTextLoader',
    'cosine',
    'embed_label',
    'load_embedding_table',
    'register_loader',
    'tokenize',
    'write_binary_table',
    'write_word2vec_text',
]
