"""
Recuperación de clave con el algoritmo de Simon (acceso cuántico a E y P)

f(x) = E(x) ⊕ P(x) = P(x ⊕ k1) ⊕ k2 ⊕ P(x) tiene periodo k1: cada medición
devuelve u con u·k1 = 0. Con rango n − 1 el núcleo es {0, k1}; k2 sale de
una evaluación y la clave se verifica en dos puntos frescos.
"""
import logging
from typing import Optional

import numpy as np

from ..cipher.even_mansour import Key, em_permutation
from ..cipher.permutation import Permutation
from ..config import settings
from ..games.actions import FinalGuess, GameView, QuantumProgram, Strategy
from ..quantum.statevector import apply_hadamard
from ..schemas.experiments import AttackResult
from ..utils.errors import ConfigError
from .gf2 import GF2Matrix, gf2_nullspace, gf2_rank, span
from .oracles import KeyRecoveryAttack, attack_result, play_attack

logger = logging.getLogger(__name__)


def simon_sample(ctx, n: int) -> int:
    """Una iteración: H, E, P, H sobre X y medición de X"""
    state = ctx.fresh_state(("x", n), ("y", n))
    apply_hadamard(state, "x")
    ctx.keyed_oracle(state, "x", "y")
    ctx.oracle(state, "x", "y")
    apply_hadamard(state, "x")
    return ctx.measure(state, "x")


class SimonKeyRecovery(KeyRecoveryAttack):
    """
    Iteraciones de Simon hasta rango n − 1; si ningún candidato verifica se
    descartan las filas y se vuelve a empezar dentro del mismo presupuesto.
    """

    name = "simon-q2"

    def __init__(self, n: int, max_iterations: Optional[int] = None):
        self.n = n
        self.max_iterations = 3 * n if max_iterations is None else max_iterations
        # cada iteración: una consulta a E y otra a P; verificación y k2 aparte
        super().__init__(q_e=self.max_iterations + 3, q_p=7 * self.max_iterations + 6)
        self.samples = []

    def play(self, view: GameView, rng: np.random.Generator) -> Strategy:
        n = self.n
        if self.max_iterations <= 0:
            yield FinalGuess(0)
            return
        matrix = GF2Matrix(n)
        checks = self.fresh_points(n, 2, rng, exclude=(0,))
        for _ in range(self.max_iterations):
            u = yield QuantumProgram(lambda ctx: simon_sample(ctx, n))
            self.samples.append(u)
            self.inner_runs += 1
            matrix.append(u)
            if gf2_rank(matrix) < n - 1:
                continue
            for s in sorted(set(span(gf2_nullspace(matrix)))):
                e0 = yield from self.cipher(0)
                ps = yield from self.public(s)
                if (yield from self.verify(n, s, e0 ^ ps, checks)):
                    yield FinalGuess(1)
                    return
            matrix = GF2Matrix(n)
        yield FinalGuess(0)


def simon_q2_attack(
    n: int, permutation: Permutation, key: Key, rng: np.random.Generator, max_iterations: Optional[int] = None
) -> AttackResult:
    """
    Ataque de Simon contra E_k[P] en el modo Q2.

    Raises:
        ConfigError: n supera SIMON_MAX_N
    """
    if n > settings.SIMON_MAX_N:
        raise ConfigError(f"n={n} excede el límite de Simon ({settings.SIMON_MAX_N})")
    attack = SimonKeyRecovery(n, max_iterations)
    transcript = play_attack(attack, permutation, em_permutation(permutation, key), rng, keyed=True, name="simon-q2")
    result = attack_result(attack, transcript)
    logger.debug("Simon n=%d: éxito=%s tras %d iteraciones", n, result.success, attack.inner_runs)
    return result
