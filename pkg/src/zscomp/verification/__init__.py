from .oracle import (
    SIZE_LIMIT, NaiveCompositionOracle, OracleConfig, OracleMember, OracleResult, oracle_pipeline,
)

__all__ = [
    'NaiveCompositionOracle',
    'OracleConfig',
    'OracleMember',
    'OracleResult',
    'SIZE_LIMIT',
    'oracle_pipeline',
]
