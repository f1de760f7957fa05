"""
zscomp - 基于物体-场景组合的零样本动作分类
"""

__version__ = "0.1.0"
