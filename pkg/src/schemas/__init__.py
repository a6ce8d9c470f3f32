"""
Schemas de configuración y resultados
"""
from .experiments import (
    AdvantageEstimate,
    AttackResult,
    CommandResult,
    ExperimentConfig,
    ExperimentKind,
    RESULT_COLUMNS,
    ResultRow,
    Variant,
)

__all__ = [
    "AdvantageEstimate",
    "AttackResult",
    "CommandResult",
    "ExperimentConfig",
    "ExperimentKind",
    "RESULT_COLUMNS",
    "ResultRow",
    "Variant",
]
