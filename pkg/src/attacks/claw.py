"""
Ataque Q1: búsqueda de garras con Grover de varios objetivos

Con δ ≠ 0 fijo, g(u) = P(u) ⊕ P(u ⊕ δ) y t_i = E(x_i) ⊕ E(x_i ⊕ δ) coinciden
cuando u = x_i ⊕ k1. Se consulta E clásicamente en una tabla de x_i y se
busca con Grover un u cuyo g caiga en la tabla; el oráculo de fase sobre g
cuesta cuatro consultas a P por iteración.

Regla de un candidato: un acierto (u, i) propone solo k1 = u ⊕ x_i y
k2 = E(x_i) ⊕ P(u).
"""
import logging
from typing import Dict, List, Optional

import numpy as np

from ..cipher.permutation import Permutation
from ..config import settings
from ..games.actions import FinalGuess, GameView, QuantumProgram, Strategy
from ..quantum.statevector import apply_hadamard
from ..schemas.experiments import AttackResult
from ..utils.errors import ConfigError, DegenerateDeltaError
from .grover import grover_iterations, grover_search, grover_success_probability
from .oracles import CipherOracle, KeyRecoveryAttack, attack_result, play_attack

logger = logging.getLogger(__name__)

# consultas a P por intento además de las iteraciones: g(u) y dos verificaciones
_RUN_OVERHEAD = 4


def _low_bit(delta: int) -> int:
    return delta & -delta


def canonical_points(n: int, delta: int) -> np.ndarray:
    """Representantes de los pares {x, x ⊕ δ}: el bit más bajo de δ vale 0"""
    domain = np.arange(1 << n, dtype=np.int64)
    return domain[(domain & _low_bit(delta)) == 0]


def check_delta(n: int, delta: int) -> int:
    delta = int(delta)
    if delta == 0:
        raise DegenerateDeltaError("δ = 0 hace g idénticamente nula")
    if not 0 < delta < (1 << n):
        raise ConfigError(f"δ={delta} fuera de {n} bits")
    return delta


def claw_values(table: np.ndarray, delta: int) -> np.ndarray:
    """g(u) = T(u) ⊕ T(u ⊕ δ) para todo u"""
    domain = np.arange(table.size, dtype=np.int64)
    return table ^ table[domain ^ delta]


class ClawKeyRecovery(KeyRecoveryAttack):
    """
    Args:
        n: Ancho de bloque
        delta: Desplazamiento δ ≠ 0
        table_size: Número de x_i (q_E = 2·table_size)
        retry_cap: Ejecuciones de Grover como máximo
        iterations: Iteraciones por ejecución (por defecto la forma cerrada con t = 3·table_size)
        exhaustive: Recorre todos los u clásicamente en lugar de usar Grover
    """

    name = "q1-claw"

    def __init__(
        self,
        n: int,
        delta: int = 1,
        table_size: int = 1,
        retry_cap: Optional[int] = None,
        iterations: Optional[int] = None,
        exhaustive: bool = False,
    ):
        self.n = n
        self.delta = check_delta(n, delta)
        self.table_size = int(table_size)
        self.retry_cap = settings.CLAW_RETRY_CAP if retry_cap is None else retry_cap
        self.exhaustive = exhaustive
        if iterations is None and self.table_size > 0:
            iterations = grover_iterations(n, 3 * self.table_size)
        self.iterations = iterations or 0
        q_p = (1 << n) if exhaustive else self.retry_cap * (4 * self.iterations + _RUN_OVERHEAD)
        q_e = 2 * self.table_size + 2 if self.table_size > 0 else 0
        super().__init__(q_e=q_e, q_p=q_p)
        self.table: List[int] = []

    @classmethod
    def with_resources(cls, n: int, q_e: int, q_p: int, delta: int = 1) -> "ClawKeyRecovery":
        """Un solo intento de Grover tan largo como permita q_P"""
        table_size = (q_e - 2) // 2
        available = (q_p - _RUN_OVERHEAD) // 4
        if table_size < 1 or available < 0:
            return cls(n, delta, table_size=0, retry_cap=0, iterations=0)
        optimal = grover_iterations(n, 3 * table_size)
        return cls(n, delta, table_size=table_size, retry_cap=1, iterations=min(optimal, available))

    def _grover_run(self, ctx, targets: np.ndarray) -> int:
        n, delta = self.n, self.delta
        state = ctx.fresh_state(("u", n))
        apply_hadamard(state, "u")

        def oracle(s):
            return ctx.phase_query(s, "u", lambda g: np.isin(g, targets), shifts=(0, delta))

        grover_search(state, "u", oracle, self.iterations)
        return ctx.measure(state, "u")

    def _try(self, u: int, targets: Dict[int, int], verification: List[int]):
        """Evalúa g(u) y verifica el candidato único si g(u) está en la tabla"""
        n = self.n
        pu = yield from self.public(u)
        pv = yield from self.public(u ^ self.delta)
        index = targets.get(pu ^ pv)
        if index is None:
            return False
        x = self.table[index]
        k1, k2 = u ^ x, self.cipher_values[x] ^ pu
        others = [p for p in verification if p != x][:2]
        return (yield from self.verify(n, k1, k2, others))

    def play(self, view: GameView, rng: np.random.Generator) -> Strategy:
        n, delta = self.n, self.delta
        if self.table_size < 1:
            yield FinalGuess(0)
            return
        canonical = canonical_points(n, delta)
        if self.table_size > canonical.size:
            raise ConfigError(f"La tabla no cabe en los {canonical.size} representantes de {n} bits")
        self.table = [int(x) for x in rng.choice(canonical, size=self.table_size, replace=False)]

        targets: Dict[int, int] = {}
        for index, x in enumerate(self.table):
            y0 = yield from self.cipher(x)
            y1 = yield from self.cipher(x ^ delta)
            targets.setdefault(y0 ^ y1, index)
        verification = list(self.table)
        if len(verification) < 3:
            verification += self.fresh_points(n, 2, rng)

        if self.exhaustive:
            self.inner_runs = 1
            for u in range(1 << n):
                if (yield from self._try(u, targets, verification)):
                    yield FinalGuess(1)
                    return
            yield FinalGuess(0)
            return

        target_array = np.fromiter(targets, dtype=np.int64, count=len(targets))
        for _ in range(self.retry_cap):
            self.inner_runs += 1
            u = yield QuantumProgram(lambda ctx: self._grover_run(ctx, target_array))
            if (yield from self._try(u, targets, verification)):
                yield FinalGuess(1)
                return
        yield FinalGuess(0)


def q1_claw_attack(
    n: int,
    permutation: Permutation,
    cipher: CipherOracle,
    delta: int,
    table_size: int,
    rng: np.random.Generator,
    retry_cap: Optional[int] = None,
    exhaustive: bool = False,
) -> AttackResult:
    """
    Ataque Q1 contra el oráculo clásico `cipher` y el cuántico P.

    Raises:
        ConfigError: n supera CLAW_MAX_N o la tabla no cabe
        DegenerateDeltaError: δ = 0
    """
    if n > settings.CLAW_MAX_N:
        raise ConfigError(f"n={n} excede el límite del ataque de garras ({settings.CLAW_MAX_N})")
    attack = ClawKeyRecovery(n, delta, table_size, retry_cap=retry_cap, exhaustive=exhaustive)
    transcript = play_attack(attack, permutation, cipher, rng, name="q1-claw")
    return attack_result(attack, transcript)


def claw_success_prediction(
    permutation: Permutation, cipher_table: np.ndarray, delta: int, table: List[int], iterations: Optional[int] = None
) -> float:
    """
    Probabilidad de éxito de una ejecución de Grover para una tabla concreta,
    calculada exhaustivamente: sin²((2k+1)θ) con el número real de marcados,
    por la fracción de marcados cuyo candidato único es la clave.
    """
    n = permutation.n
    g = claw_values(permutation.table, delta)
    targets: Dict[int, int] = {}
    for index, x in enumerate(table):
        targets.setdefault(int(cipher_table[x] ^ cipher_table[x ^ delta]), index)
    marked = np.flatnonzero(np.isin(g, np.fromiter(targets, dtype=np.int64, count=len(targets))))
    if marked.size == 0:
        return 0.0
    good = 0
    domain = np.arange(1 << n, dtype=np.int64)
    for u in marked:
        x = table[targets[int(g[u])]]
        k1 = int(u) ^ x
        k2 = int(cipher_table[x]) ^ int(permutation.table[u])
        if np.array_equal(permutation.table[domain ^ k1] ^ k2, cipher_table):
            good += 1
    k = grover_iterations(n, 3 * len(table)) if iterations is None else iterations
    return grover_success_probability(n, int(marked.size), k) * good / marked.size
