"""
Utilidades del laboratorio
"""
from .errors import LabError, ConfigError
from .rng import derive_rng
from .parallel import resolve_threads, run_parallel

__all__ = [
    "LabError",
    "ConfigError",
    "derive_rng",
    "resolve_threads",
    "run_parallel",
]
