"""
Amplificación de amplitud con varios elementos marcados
"""
import logging
import math
from typing import Callable, Optional

import numpy as np

from ..config import settings
from ..quantum.statevector import (
    RegisterLayout,
    StateVector,
    apply_diffusion,
    apply_phase_oracle,
    measure_register,
    predicate_mask,
    uniform_superposition,
)
from ..utils.errors import ConfigError, VacuousPredicateError

logger = logging.getLogger(__name__)


def grover_iterations(n: int, marked: int) -> int:
    """⌊(π/4)·√(2^n/t)⌋ (0 cuando todo está marcado)"""
    if marked < 1:
        raise VacuousPredicateError("El predicado no marca ningún elemento")
    return int(math.floor(math.pi / 4 * math.sqrt((1 << n) / marked)))


def grover_success_probability(n: int, marked: int, iterations: int) -> float:
    """sin²((2k+1)θ) con sin θ = √(t/2^n)"""
    if marked <= 0:
        return 0.0
    theta = math.asin(math.sqrt(min(1.0, marked / (1 << n))))
    return math.sin((2 * iterations + 1) * theta) ** 2


def grover_search(
    state: StateVector, reg: str, oracle: Callable[[StateVector], StateVector], iterations: int
) -> StateVector:
    """`iterations` rondas de oráculo de fase seguido de difusión sobre `reg`"""
    for _ in range(iterations):
        oracle(state)
        apply_diffusion(state, reg)
    return state


def grover_multi_target(
    n: int,
    predicate,
    num_targets_hint: Optional[int],
    rng: np.random.Generator,
) -> int:
    """
    Búsqueda de Grover sobre n qubits; devuelve el valor medido.

    Args:
        n: Ancho del registro
        predicate: Máscara booleana de 2^n entradas o función vectorizada
        num_targets_hint: t usado para el número de iteraciones (por defecto el real)
        rng: Flujo aleatorio de la medición

    Raises:
        ConfigError: n supera GROVER_MAX_N
        VacuousPredicateError: Ningún elemento marcado
    """
    if n > settings.GROVER_MAX_N:
        raise ConfigError(f"n={n} excede el límite de Grover ({settings.GROVER_MAX_N})")
    mask = predicate_mask(predicate, 1 << n)
    marked = int(mask.sum())
    if marked == 0:
        raise VacuousPredicateError("El predicado no marca ningún elemento")
    iterations = grover_iterations(n, num_targets_hint or marked)

    state = uniform_superposition(RegisterLayout.of(("u", n)), ["u"])
    grover_search(state, "u", lambda s: apply_phase_oracle(s, "u", mask), iterations)
    outcome, _ = measure_register(state, "u", rng)
    return outcome
