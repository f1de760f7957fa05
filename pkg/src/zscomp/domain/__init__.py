"""
领域层：词表与向量、概率矩阵、组合空间、选择、推理与评估
"""
