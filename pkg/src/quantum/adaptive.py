"""
Modelo de consultas adaptativas

Cada ronda aplica el pinching sobre el qubit de control C (muestreado), el
oráculo controlado y el canal del adversario Φ, durante q_max rondas. El
número de consultas realizadas es la cantidad de rondas con C = 1.
"""
from dataclasses import dataclass, field
from typing import Any, Callable, List

import numpy as np

from .statevector import StateVector, measure_register, probability_of


@dataclass
class AdaptiveRun:
    """Trayectoria de una ejecución adaptativa"""

    state: StateVector
    queries: int = 0
    control_probabilities: List[float] = field(default_factory=list)
    outcomes: List[int] = field(default_factory=list)

    @property
    def expected_queries(self) -> float:
        """Σ p_{i−1}: consultas esperadas condicionadas a la trayectoria"""
        return float(sum(self.control_probabilities))


def run_adaptive_rounds(
    state: StateVector,
    ctrl: str,
    controlled_oracle: Callable[[StateVector], Any],
    phi: Callable[[StateVector, int, np.random.Generator], Any],
    q_max: int,
    rng: np.random.Generator,
) -> AdaptiveRun:
    """
    Ejecuta (Φ ∘ cO ∘ M_C)^{q_max} sobre `state`.

    Args:
        state: Estado inicial (se modifica en sitio)
        ctrl: Registro de control de un qubit
        controlled_oracle: Aplica cO al estado
        phi: Canal del adversario; recibe el estado, el índice de ronda y el flujo aleatorio
        q_max: Número de rondas
        rng: Flujo aleatorio del pinching
    """
    run = AdaptiveRun(state=state)
    for round_index in range(q_max):
        run.control_probabilities.append(probability_of(state, ctrl, 1))
        outcome, state = measure_register(state, ctrl, rng)
        run.outcomes.append(outcome)
        controlled_oracle(state)
        run.queries += outcome
        phi(state, round_index, rng)
    run.state = state
    return run
