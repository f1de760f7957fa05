"""
应用层DTO
"""
from .run_config import PATH_FIELDS, RunConfig, configuration_error

__all__ = ['PATH_FIELDS', 'RunConfig', 'configuration_error']
