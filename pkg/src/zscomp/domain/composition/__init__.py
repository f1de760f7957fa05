from .space import CACHE_MAGIC, CompositionPool, CompositionRef, CompositionSpace

__all__ = ['CACHE_MAGIC', 'CompositionPool', 'CompositionRef', 'CompositionSpace']
