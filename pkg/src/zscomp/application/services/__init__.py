"""
应用层服务
"""
from .classification_service import ClassificationAppService
from .evaluation_service import ABLATION_METHODS, EvaluationAppService
from .experiment_context import ExperimentContext
from .fixture_service import FixtureAppService, FixtureSpec, generate_planted_instance
from .oracle_check_service import OracleCheckService
from .selection_service import SelectionAppService

__all__ = [
    'ABLATION_METHODS',
    'ClassificationAppService',
    'EvaluationAppService',
    'ExperimentContext',
    'FixtureAppService',
    'FixtureSpec',
    'OracleCheckService',
    'SelectionAppService',
    'generate_planted_instance',
]
