"""
Ataque clásico por cumpleaños con q_E · q_P ≈ 2^n

Misma estructura que el ataque de garras, pero los u se sondean uno a uno:
cada sondeo cuesta dos consultas a P y acierta con probabilidad d/2^n.
"""
import logging

import numpy as np

from ..cipher.permutation import Permutation
from ..games.actions import FinalGuess, GameView, Strategy
from ..schemas.experiments import AttackResult
from .claw import check_delta, canonical_points
from .oracles import CipherOracle, KeyRecoveryAttack, attack_result, play_attack

logger = logging.getLogger(__name__)


class BirthdayKeyRecovery(KeyRecoveryAttack):
    name = "birthday"

    def __init__(self, n: int, delta: int = 1, d_size: int = 0, t_size: int = 0):
        self.n = n
        self.delta = check_delta(n, delta)
        self.d_size = int(d_size)
        self.t_size = int(t_size)
        # por sondeo: g(u) y a lo sumo dos verificaciones
        super().__init__(q_e=2 * self.d_size + 2, q_p=4 * self.t_size)

    @classmethod
    def with_resources(cls, n: int, q_e: int, q_p: int, delta: int = 1) -> "BirthdayKeyRecovery":
        return cls(n, delta, d_size=max(0, (q_e - 2) // 2), t_size=q_p // 4)

    def play(self, view: GameView, rng: np.random.Generator) -> Strategy:
        n, delta = self.n, self.delta
        if self.d_size < 1 or self.t_size < 1:
            yield FinalGuess(0)
            return
        table = [int(x) for x in rng.choice(canonical_points(n, delta), size=self.d_size, replace=False)]
        targets = {}
        for index, x in enumerate(table):
            y0 = yield from self.cipher(x)
            y1 = yield from self.cipher(x ^ delta)
            targets.setdefault(y0 ^ y1, index)
        verification = table + (self.fresh_points(n, 2, rng) if len(table) < 3 else [])

        probes = rng.choice(1 << n, size=min(self.t_size, 1 << n), replace=False)
        for u in (int(p) for p in probes):
            self.inner_runs += 1
            pu = yield from self.public(u)
            pv = yield from self.public(u ^ delta)
            index = targets.get(pu ^ pv)
            if index is None:
                continue
            x = table[index]
            others = [p for p in verification if p != x][:2]
            if (yield from self.verify(n, u ^ x, self.cipher_values[x] ^ pu, others)):
                yield FinalGuess(1)
                return
        yield FinalGuess(0)


def classical_birthday_attack(
    n: int,
    cipher: CipherOracle,
    permutation: Permutation,
    delta: int,
    d_size: int,
    t_size: int,
    rng: np.random.Generator,
) -> AttackResult:
    """Tabla de d objetivos E(x_i) ⊕ E(x_i ⊕ δ) y t sondeos de P(u) ⊕ P(u ⊕ δ)"""
    attack = BirthdayKeyRecovery(n, delta, d_size, t_size)
    transcript = play_attack(attack, permutation, cipher, rng, name="birthday")
    return attack_result(attack, transcript)
