"""
Ejecución de ataques contra oráculos fijos

Los ataques son distinguidores como cualquier otro; aquí se juegan contra
un mundo con P y E ya fijados, de modo que el motor de partidas cuenta las
consultas y hace cumplir los presupuestos.
"""
import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from ..cipher.even_mansour import Key
from ..cipher.permutation import Permutation
from ..cipher.reprogramming import Transcript
from ..games.actions import ClassicalQuery, Direction, Distinguisher, GameView, QuantumProgram
from ..games.engine import GameTranscript, OracleWorld, play_game
from ..schemas.experiments import AttackResult
from ..utils.errors import ForbiddenQueryError

logger = logging.getLogger(__name__)

CipherOracle = Union[Permutation, Callable[[int], int]]


class FixedOracleWorld(OracleWorld):
    """
    Oráculo clásico E (permutación o función) y oráculo cuántico P fijos.
    Con `keyed` y E una permutación también hay acceso cuántico a E (Q2).
    """

    def __init__(self, permutation: Permutation, cipher: CipherOracle, keyed: bool = False):
        super().__init__(permutation.n)
        self.permutation = permutation
        self.cipher = cipher
        self.keyed = keyed
        self.allow_inverse = isinstance(cipher, Permutation)

    def classical(self, query: ClassicalQuery, transcript: Transcript) -> int:
        if query.direction is Direction.INVERSE:
            return self.cipher.inverse(query.value)
        return int(self.cipher(query.value))

    def quantum_table(self, inverse: bool) -> np.ndarray:
        return self.permutation.inverse_table if inverse else self.permutation.table

    def keyed_table(self, inverse: bool) -> np.ndarray:
        if not (self.keyed and isinstance(self.cipher, Permutation)):
            raise ForbiddenQueryError("El acceso cuántico a E requiere el modo Q2 con E permutación")
        return self.cipher.inverse_table if inverse else self.cipher.table


def play_attack(
    attack: Distinguisher,
    permutation: Permutation,
    cipher: CipherOracle,
    rng: np.random.Generator,
    keyed: bool = False,
    name: str = "attack",
) -> GameTranscript:
    world = FixedOracleWorld(permutation, cipher, keyed=keyed)
    view = GameView(game=name, n=permutation.n, allow_inverse=world.allow_inverse, keyed_quantum=keyed)
    return play_game(world, attack, view, rng)


class KeyRecoveryAttack(Distinguisher):
    """
    Base de los ataques de recuperación de clave.

    Guarda en caché los valores de E y P ya consultados (una consulta repetida
    no se paga dos veces) y deja en `recovered` la clave verificada. Como
    distinguidor apuesta 1 si y solo si recupera una clave.
    """

    def __init__(self, q_e: int, q_p: int):
        super().__init__(q_e, q_p)
        self.cipher_values: Dict[int, int] = {}
        self.public_values: Dict[int, int] = {}
        self.recovered: Optional[Key] = None
        self.inner_runs = 0

    def cipher(self, x: int):
        """E(x) con caché; usar con `yield from`"""
        if x not in self.cipher_values:
            self.cipher_values[x] = yield ClassicalQuery(x)
        return self.cipher_values[x]

    def public(self, u: int):
        """P(u) con caché mediante una consulta base; usar con `yield from`"""
        if u not in self.public_values:
            self.public_values[u] = yield QuantumProgram(lambda ctx: ctx.basis_query(u))
        return self.public_values[u]

    def verify(self, n: int, k1: int, k2: int, points: Sequence[int]):
        """E(x) = P(x ⊕ k1) ⊕ k2 en cada punto; usar con `yield from`"""
        for x in points:
            y = yield from self.cipher(x)
            p = yield from self.public(x ^ k1)
            if y != p ^ k2:
                return False
        self.recovered = Key(n, k1, k2)
        return True

    def fresh_points(self, n: int, count: int, rng: np.random.Generator, exclude: Iterable[int] = ()) -> List[int]:
        """Puntos no consultados aún (ni excluidos) para verificar"""
        banned = set(self.cipher_values) | set(exclude)
        points: List[int] = []
        while len(points) < count and len(banned) < (1 << n):
            x = int(rng.integers(0, 1 << n))
            if x not in banned:
                banned.add(x)
                points.append(x)
        return points


def attack_result(attack: KeyRecoveryAttack, transcript: GameTranscript) -> AttackResult:
    """Resultado a partir de la transcripción contada por el motor"""
    return AttackResult(
        recovered_key=attack.recovered,
        success=attack.recovered is not None,
        classical_queries_used=transcript.classical_queries,
        quantum_queries_used=transcript.total_quantum + transcript.keyed_quantum_queries,
        trials_inner=attack.inner_runs,
    )
