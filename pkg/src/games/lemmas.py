"""
Juegos de remuestreo y reprogramación

- Permutación: fase 1 con acceso a P/P^{-1} (presupuesto q); se sortean s0, s1;
  fase 2 con (s0, s1) y acceso a P_b, donde P_1 = P ∘ swap_{s0,s1}.
- Función: fase 1 con acceso a F; se sortean s e y; fase 2 con s y acceso a
  F_b, donde F_1 = F_{s↦y}.
- Reprogramación arbitraria: el distinguidor describe F y un algoritmo B;
  fase 2 con acceso a F (b=0) o F^{(B)} (b=1); fase 3 revela la aleatoriedad
  de B y revoca el oráculo.

Las tres funciones devuelven el `GameTranscript`; el bit apostado es `.guess`.
"""
import logging
from abc import abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional, Union

import numpy as np

from ..cipher.permutation import (
    FunctionTable,
    Permutation,
    sample_function,
    sample_permutation,
    swap_after,
)
from ..cipher.reprogramming import ReprogramSet, fn_reprogram_point, fn_reprogram_set
from ..config import settings
from ..utils.errors import ConfigError, ForbiddenQueryError, ProtocolError
from .actions import Distinguisher, GameView
from .engine import GameTranscript, OracleWorld, play_game

logger = logging.getLogger(__name__)


def phase2_budget(n: int) -> int:
    """Tope de consultas de la fase 2 (ilimitada en teoría)"""
    return settings.PHASE2_BUDGET or (1 << n)


# ============================================================================
# REMUESTREO DE PERMUTACIONES
# ============================================================================

class PermResamplingWorld(OracleWorld):

    def __init__(self, n: int, b: int, rng: np.random.Generator):
        super().__init__(n)
        self.b = b
        self.rng = rng
        self.permutation = sample_permutation(n, rng)
        self.quantum: Permutation = self.permutation
        self.phase = 0

    def quantum_table(self, inverse: bool) -> np.ndarray:
        return self.quantum.inverse_table if inverse else self.quantum.table

    def next_phase(self) -> Any:
        if self.phase:
            raise ProtocolError("El juego de remuestreo solo tiene dos fases")
        self.phase = 1
        s0 = int(self.rng.integers(0, 1 << self.in_bits))
        s1 = int(self.rng.integers(0, 1 << self.in_bits))
        if self.b:
            self.quantum = swap_after(self.permutation, s0, s1)
        return s0, s1

    def phase_budget(self, phase: int, declared: int) -> Optional[int]:
        return declared if phase == 0 else phase2_budget(self.in_bits)


def run_perm_resampling_game(adv: Distinguisher, n: int, b: int, rng: np.random.Generator) -> GameTranscript:
    game_rng, adversary_rng = rng.spawn(2)
    world = PermResamplingWorld(n, b, game_rng)
    view = GameView(game="resample-perm", n=n)
    return play_game(world, adv, view, adversary_rng)


# ============================================================================
# REMUESTREO DE FUNCIONES
# ============================================================================

class FunctionResamplingWorld(OracleWorld):
    allow_inverse = False

    def __init__(self, m: int, n: int, b: int, rng: np.random.Generator):
        super().__init__(m, n)
        self.b = b
        self.rng = rng
        self.function = sample_function(m, n, rng)
        self.quantum: FunctionTable = self.function
        self.phase = 0

    def quantum_table(self, inverse: bool) -> np.ndarray:
        if inverse:
            raise ForbiddenQueryError("Una función no tiene oráculo inverso")
        return self.quantum.table

    def next_phase(self) -> Any:
        if self.phase:
            raise ProtocolError("El juego de remuestreo solo tiene dos fases")
        self.phase = 1
        s = int(self.rng.integers(0, 1 << self.in_bits))
        y = int(self.rng.integers(0, 1 << self.out_bits))
        if self.b:
            self.quantum = fn_reprogram_point(self.function, s, y)
        return s

    def phase_budget(self, phase: int, declared: int) -> Optional[int]:
        return declared if phase == 0 else phase2_budget(self.in_bits)


def run_fn_resampling_game(
    adv: Distinguisher, m: int, n: int, b: int, rng: np.random.Generator
) -> GameTranscript:
    game_rng, adversary_rng = rng.spawn(2)
    world = FunctionResamplingWorld(m, n, b, game_rng)
    view = GameView(game="resample-fn", n=n, m=m, allow_inverse=False)
    return play_game(world, adv, view, adversary_rng)


# ============================================================================
# REPROGRAMACIÓN ARBITRARIA
# ============================================================================

Reprogrammer = Callable[[int], Union[ReprogramSet, Iterable]]


@dataclass
class ReprogrammingSetup:
    """
    Descripción que entrega el distinguidor antes de jugar.

    `reprogrammer(r)` es B ejecutado con la aleatoriedad r ∈ [0, 2^randomness_bits).
    `epsilon_bound` solo se usa cuando el espacio de aleatoriedad es demasiado
    grande para enumerarlo.
    """

    function: FunctionTable
    reprogrammer: Reprogrammer
    randomness_bits: int
    epsilon_bound: Optional[float] = None

    def sample(self, r: int) -> ReprogramSet:
        produced = self.reprogrammer(r)
        if isinstance(produced, ReprogramSet):
            return produced
        return ReprogramSet(tuple(produced))


class ReprogrammingDistinguisher(Distinguisher):
    """Distinguidor del juego de reprogramación arbitraria"""

    @abstractmethod
    def setup(self, rng: np.random.Generator) -> ReprogrammingSetup:
        """Elige F y B"""


def reprogramming_epsilon(setup: ReprogrammingSetup) -> float:
    """
    ε = max_x Pr_r[x ∈ B_1(r)], exacto por enumeración cuando el espacio de
    aleatoriedad tiene a lo sumo 2^EXACT_EPSILON_MAX_BITS elementos.

    Raises:
        ConfigError: Espacio demasiado grande y sin cota analítica
    """
    if setup.randomness_bits > settings.EXACT_EPSILON_MAX_BITS:
        if setup.epsilon_bound is None:
            raise ConfigError(
                f"Aleatoriedad de {setup.randomness_bits} bits sin cota analítica de ε"
            )
        return float(setup.epsilon_bound)
    space = 1 << setup.randomness_bits
    counts = np.zeros(1 << setup.function.m, dtype=np.int64)
    for r in range(space):
        for x in setup.sample(r).inputs:
            counts[x] += 1
    return float(counts.max() / space) if counts.size else 0.0


class ReprogrammingWorld(OracleWorld):
    allow_inverse = False

    def __init__(self, setup: ReprogrammingSetup, b: int, rng: np.random.Generator):
        super().__init__(setup.function.m, setup.function.n)
        self.setup = setup
        self.r = int(rng.integers(0, 1 << setup.randomness_bits))
        self.reprogram = setup.sample(self.r)
        self.quantum = fn_reprogram_set(setup.function, self.reprogram) if b else setup.function
        self.revoked = False

    def quantum_table(self, inverse: bool) -> np.ndarray:
        if inverse:
            raise ForbiddenQueryError("Una función no tiene oráculo inverso")
        if self.revoked:
            raise ForbiddenQueryError("El acceso al oráculo terminó al revelar la aleatoriedad de B")
        return self.quantum.table

    def next_phase(self) -> Any:
        if self.revoked:
            raise ProtocolError("La aleatoriedad de B ya fue revelada")
        self.revoked = True
        return self.r


def run_arbitrary_reprogramming_game(
    d: ReprogrammingDistinguisher, b: int, rng: np.random.Generator
) -> GameTranscript:
    game_rng, adversary_rng = rng.spawn(2)
    setup = d.setup(adversary_rng)
    world = ReprogrammingWorld(setup, b, game_rng)
    view = GameView(
        game="reprogram",
        n=setup.function.n,
        m=setup.function.m,
        allow_inverse=False,
        extra={"function": setup.function},
    )
    return play_game(world, d, view, adversary_rng)
