"""
Juegos de Even-Mansour: mundo real/ideal, híbridos H_j / H'_j, los
experimentos Expt_j / Expt'_j con eventos malos, y la variante de solo ida
con sus híbridos.

Convenciones comunes:
- El mundo recibe su propio flujo aleatorio; el distinguidor otro.
- La j-ésima consulta clásica (base cero) es la (j+1)-ésima del texto; el
  corte de un híbrido ocurre cuando llega la consulta de índice j.
"""
import logging
from enum import Enum
from typing import Optional

import numpy as np

from ..cipher.even_mansour import (
    Key,
    KeyDistribution,
    em_table,
    fwd_only_table,
    sample_k1_given_k2,
    sample_k2_given_k1,
    sample_key,
)
from ..cipher.permutation import (
    FunctionTable,
    Permutation,
    sample_function,
    sample_permutation,
    swap_after,
)
from ..cipher.reprogramming import Transcript, fwd_only_reprogram, perm_reprogram
from ..utils.errors import ConfigError, HybridRangeError
from .actions import ClassicalQuery, Direction, Distinguisher, GameView
from .engine import GameTranscript, OracleWorld, play_game

logger = logging.getLogger(__name__)


class World(str, Enum):
    REAL = "real"
    IDEAL = "ideal"


def _split(rng: np.random.Generator):
    game_rng, adversary_rng = rng.spawn(2)
    return game_rng, adversary_rng


def _uniform_outside(n: int, excluded: set, rng: np.random.Generator) -> int:
    """Valor uniforme de n bits fuera de `excluded` (por rechazo)"""
    if len(excluded) >= (1 << n):
        raise ConfigError("No quedan valores disponibles fuera del conjunto excluido")
    while True:
        value = int(rng.integers(0, 1 << n))
        if value not in excluded:
            return value


# ============================================================================
# MUNDOS SOBRE PERMUTACIONES
# ============================================================================

class _PermutationWorld(OracleWorld):
    """Oráculo cuántico P o una reprogramación suya; acceso clásico por definir"""

    def __init__(self, n: int, permutation: Permutation):
        super().__init__(n)
        self.permutation = permutation
        self.quantum: Permutation = permutation

    def quantum_table(self, inverse: bool) -> np.ndarray:
        return self.quantum.inverse_table if inverse else self.quantum.table


class RealWorld(_PermutationWorld):
    """(E_k[P], P)"""

    def __init__(self, n: int, dist: KeyDistribution, rng: np.random.Generator, keyed: bool = False):
        super().__init__(n, sample_permutation(n, rng))
        self.key = sample_key(dist, n, rng)
        self.cipher = Permutation(n, em_table(self.permutation, self.key))
        self.keyed = keyed

    def classical(self, query: ClassicalQuery, transcript: Transcript) -> int:
        if query.direction is Direction.FORWARD:
            return int(self.cipher.table[query.value])
        return int(self.cipher.inverse_table[query.value])

    def keyed_table(self, inverse: bool) -> np.ndarray:
        if not self.keyed:
            return super().keyed_table(inverse)
        return self.cipher.inverse_table if inverse else self.cipher.table


class IdealWorld(_PermutationWorld):
    """(R, P) con R y P independientes"""

    def __init__(self, n: int, rng: np.random.Generator, keyed: bool = False):
        super().__init__(n, sample_permutation(n, rng))
        self.random = sample_permutation(n, rng)
        self.keyed = keyed

    def classical(self, query: ClassicalQuery, transcript: Transcript) -> int:
        if query.direction is Direction.FORWARD:
            return int(self.random.table[query.value])
        return int(self.random.inverse_table[query.value])

    def keyed_table(self, inverse: bool) -> np.ndarray:
        if not self.keyed:
            return super().keyed_table(inverse)
        return self.random.inverse_table if inverse else self.random.table


class HybridWorld(_PermutationWorld):
    """
    H_j: (R, P) hasta justo antes de la consulta clásica de índice j, luego
    (E_k[P], P_{T_j,k}). H'_j: esa consulta aún la responde R y después se
    pasa a (E_k[P], P_{T_{j+1},k}).
    """

    def __init__(self, n: int, dist: KeyDistribution, j: int, primed: bool, rng: np.random.Generator):
        super().__init__(n, sample_permutation(n, rng))
        self.random = sample_permutation(n, rng)
        self.key = sample_key(dist, n, rng)
        self.cipher = Permutation(n, em_table(self.permutation, self.key))
        self.j = j
        self.primed = primed

    def _reprogram(self, transcript: Transcript) -> None:
        strict = Transcript(transcript.entries)
        self.quantum = perm_reprogram(self.permutation, strict, self.key)

    def classical(self, query: ClassicalQuery, transcript: Transcript) -> int:
        index = len(transcript)
        if index == self.j and not self.primed:
            self._reprogram(transcript)
        use_random = index < self.j or (self.primed and index == self.j)
        source = self.random if use_random else self.cipher
        if query.direction is Direction.FORWARD:
            answer = int(source.table[query.value])
            pair = (query.value, answer)
        else:
            answer = int(source.inverse_table[query.value])
            pair = (answer, query.value)
        if self.primed and index == self.j:
            self._reprogram(transcript.extended(*pair))
        return answer


class ExptWorld(_PermutationWorld):
    """
    Expt_j / Expt'_j. Antes de la consulta de índice j el mundo es ideal; esa
    consulta fija s0, s1, P1 = P ∘ swap_{s0,s1} y la clave de modo que la
    respuesta quede ligada a P1. Las sentencias enmarcadas (versión primada)
    solo se ejecutan si `primed`.
    """

    def __init__(self, n: int, dist: KeyDistribution, j: int, primed: bool, rng: np.random.Generator):
        super().__init__(n, sample_permutation(n, rng))
        self.random = sample_permutation(n, rng)
        self.dist = KeyDistribution(dist)
        self.j = j
        self.primed = primed
        self.rng = rng
        self.s0: Optional[int] = None
        self.s1: Optional[int] = None
        self.key: Optional[Key] = None
        self.p1: Optional[Permutation] = None

    def _cut(self, query: ClassicalQuery, transcript: Transcript) -> int:
        n = self.in_bits
        self.s0 = int(self.rng.integers(0, 1 << n))
        self.s1 = int(self.rng.integers(0, 1 << n))
        self.p1 = swap_after(self.permutation, self.s0, self.s1)
        previous_x = set(transcript.inputs)
        previous_y = set(transcript.outputs)

        if query.direction is Direction.FORWARD:
            x = query.value
            k1 = self.s0 ^ x
            k2 = sample_k2_given_k1(self.dist, n, k1, self.rng)
            y = int(self.p1.table[self.s0]) ^ k2
            self.flags.bad1 = y in previous_y
            if self.primed and self.flags.bad1:
                y = _uniform_outside(n, previous_y, self.rng)
            self.flags.bad2 = (self.s1 ^ k1) in previous_x
            answer = y
        else:
            y = query.value
            k2 = int(self.p1.table[self.s0]) ^ y
            k1 = sample_k1_given_k2(self.dist, n, k2, self.rng)
            x = self.s0 ^ k1
            self.flags.bad1 = x in previous_x
            if self.primed and self.flags.bad1:
                x = _uniform_outside(n, previous_x, self.rng)
            self.flags.bad2 = (int(self.permutation.table[self.s0]) ^ k2) in previous_y
            answer = x

        self.key = Key(n, k1, k2)
        strict = Transcript(transcript.entries)
        if self.primed and (self.flags.bad1 or self.flags.bad2):
            self.quantum = perm_reprogram(self.permutation, strict.extended(x, y), self.key)
        else:
            self.quantum = perm_reprogram(self.p1, strict, self.key)
        return answer

    def _after_cut(self, query: ClassicalQuery) -> int:
        key = self.key
        target = self.s1 ^ key.k1
        if query.direction is Direction.FORWARD:
            x = query.value
            if x == target:
                self.flags.bad3 = True
            source = self.permutation if (self.primed and x == target) else self.p1
            return int(source.table[x ^ key.k1]) ^ key.k2
        y = query.value
        x = int(self.p1.inverse_table[y ^ key.k2]) ^ key.k1
        if x == target:
            self.flags.bad3 = True
            if self.primed:
                x = int(self.permutation.inverse_table[y ^ key.k2]) ^ key.k1
        return x

    def classical(self, query: ClassicalQuery, transcript: Transcript) -> int:
        index = len(transcript)
        if index < self.j:
            source = self.random
            if query.direction is Direction.FORWARD:
                return int(source.table[query.value])
            return int(source.inverse_table[query.value])
        if index == self.j:
            return self._cut(query, transcript)
        return self._after_cut(query)


# ============================================================================
# MUNDOS DE SOLO IDA (FUNCIONES)
# ============================================================================

class _FunctionWorld(OracleWorld):
    allow_inverse = False

    def __init__(self, n: int, function: FunctionTable):
        super().__init__(n)
        self.function = function
        self.quantum: FunctionTable = function

    def quantum_table(self, inverse: bool) -> np.ndarray:
        if inverse:
            return super().quantum_table(inverse)
        return self.quantum.table


class ForwardRealWorld(_FunctionWorld):
    """(E_k[F], F) con E_k[F](x) = F(x ⊕ k)"""

    def __init__(self, n: int, rng: np.random.Generator):
        super().__init__(n, sample_function(n, n, rng))
        self.k = int(rng.integers(0, 1 << n))
        self.cipher = fwd_only_table(self.function, self.k)

    def classical(self, query: ClassicalQuery, transcript: Transcript) -> int:
        return int(self.cipher[query.value])


class ForwardIdealWorld(_FunctionWorld):
    """(R, F) con R y F funciones uniformes independientes"""

    def __init__(self, n: int, rng: np.random.Generator):
        super().__init__(n, sample_function(n, n, rng))
        self.random = sample_function(n, n, rng)

    def classical(self, query: ClassicalQuery, transcript: Transcript) -> int:
        return int(self.random.table[query.value])


class ForwardHybridWorld(_FunctionWorld):
    """Híbridos de la variante de solo ida con F_{T,k}"""

    def __init__(self, n: int, j: int, primed: bool, rng: np.random.Generator):
        super().__init__(n, sample_function(n, n, rng))
        self.random = sample_function(n, n, rng)
        self.k = int(rng.integers(0, 1 << n))
        self.cipher = fwd_only_table(self.function, self.k)
        self.j = j
        self.primed = primed

    def classical(self, query: ClassicalQuery, transcript: Transcript) -> int:
        index = len(transcript)
        if index == self.j and not self.primed:
            self.quantum = fwd_only_reprogram(self.function, transcript, self.k)
        if index < self.j or (self.primed and index == self.j):
            answer = int(self.random.table[query.value])
        else:
            answer = int(self.cipher[query.value])
        if self.primed and index == self.j:
            self.quantum = fwd_only_reprogram(self.function, transcript.extended(query.value, answer), self.k)
        return answer


# ============================================================================
# PUNTOS DE ENTRADA
# ============================================================================

def _check_hybrid_index(adv: Distinguisher, j: int, primed: bool) -> None:
    upper = adv.q_e - 1 if primed else adv.q_e
    if not 0 <= j <= upper:
        kind = "H'_j" if primed else "H_j"
        raise HybridRangeError(f"j={j} fuera de rango para {kind} con q_E={adv.q_e}")


def _view(game: str, n: int, allow_inverse: bool = True, keyed: bool = False, **extra) -> GameView:
    return GameView(game=game, n=n, allow_inverse=allow_inverse, keyed_quantum=keyed, extra=extra)


def run_em_game(
    adv: Distinguisher,
    n: int,
    dist: KeyDistribution,
    world: World,
    rng: np.random.Generator,
    quantum_keyed: bool = False,
) -> GameTranscript:
    """
    Partida real (E_k[P], P) o ideal (R, P).

    Con `quantum_keyed` el distinguidor obtiene además acceso cuántico al
    oráculo clásico (modo diagnóstico Q2); esas consultas cuentan contra q_E.
    """
    game_rng, adversary_rng = _split(rng)
    if World(world) is World.REAL:
        oracle_world = RealWorld(n, dist, game_rng, keyed=quantum_keyed)
    else:
        oracle_world = IdealWorld(n, game_rng, keyed=quantum_keyed)
    view = _view("em", n, keyed=quantum_keyed, world=World(world).value)
    return play_game(oracle_world, adv, view, adversary_rng)


def run_hybrid(
    adv: Distinguisher, n: int, dist: KeyDistribution, j: int, primed: bool, rng: np.random.Generator
) -> GameTranscript:
    """H_j (primed=False) o H'_j (primed=True)"""
    _check_hybrid_index(adv, j, primed)
    game_rng, adversary_rng = _split(rng)
    world = HybridWorld(n, dist, j, primed, game_rng)
    return play_game(world, adv, _view("hybrid", n, j=j, primed=primed), adversary_rng)


def run_expt(
    adv: Distinguisher, n: int, dist: KeyDistribution, j: int, primed: bool, rng: np.random.Generator
) -> GameTranscript:
    """Expt_j (primed=False) o Expt'_j (primed=True) con banderas bad1/bad2/bad3"""
    _check_hybrid_index(adv, j, True)
    game_rng, adversary_rng = _split(rng)
    world = ExptWorld(n, dist, j, primed, game_rng)
    return play_game(world, adv, _view("expt", n, j=j, primed=primed), adversary_rng)


def run_forward_only_game(adv: Distinguisher, n: int, world: World, rng: np.random.Generator) -> GameTranscript:
    """Variante de solo ida: (E_k[F], F) o (R, F); las consultas inversas se rechazan"""
    game_rng, adversary_rng = _split(rng)
    if World(world) is World.REAL:
        oracle_world = ForwardRealWorld(n, game_rng)
    else:
        oracle_world = ForwardIdealWorld(n, game_rng)
    view = _view("forward-only", n, allow_inverse=False, world=World(world).value)
    return play_game(oracle_world, adv, view, adversary_rng)


def run_forward_hybrid(adv: Distinguisher, n: int, j: int, primed: bool, rng: np.random.Generator) -> GameTranscript:
    """Híbridos H_j / H'_j de la variante de solo ida"""
    _check_hybrid_index(adv, j, primed)
    game_rng, adversary_rng = _split(rng)
    world = ForwardHybridWorld(n, j, primed, game_rng)
    view = _view("forward-hybrid", n, allow_inverse=False, j=j, primed=primed)
    return play_game(world, adv, view, adversary_rng)
