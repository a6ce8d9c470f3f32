"""
Biblioteca de distinguidores

Estrategias pequeñas y deterministas dado su flujo aleatorio; cada juego las
instancia de nuevo por ensayo a través de una fábrica (p. ej.
`functools.partial(ResamplingProber, 4)`).
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..cipher.permutation import sample_function
from ..cipher.reprogramming import ReprogramSet
from ..quantum.adaptive import run_adaptive_rounds
from ..quantum.statevector import StateVector, apply_hadamard, probability_of
from .actions import (
    ClassicalQuery,
    Direction,
    Distinguisher,
    FinalGuess,
    GameView,
    NextPhase,
    QuantumProgram,
    Strategy,
)
from .lemmas import ReprogrammingDistinguisher, ReprogrammingSetup

logger = logging.getLogger(__name__)


def _parity(*values: int) -> int:
    acc = 0
    for value in values:
        acc ^= int(value)
    return bin(acc).count("1") & 1


def _distinct_points(size: int, count: int, rng: np.random.Generator) -> List[int]:
    count = min(count, size)
    return [int(v) for v in rng.choice(size, size=count, replace=False)]


# ============================================================================
# TRIVIALES
# ============================================================================

class ZeroQueryGuesser(Distinguisher):
    """Sin consultas; apuesta un bit fijo"""

    name = "zero-query"

    def __init__(self, guess: int = 0):
        super().__init__(0, 0)
        self.guess = guess

    def play(self, view: GameView, rng: np.random.Generator) -> Strategy:
        yield FinalGuess(self.guess)


class FirstOutputLowBit(Distinguisher):
    """Una consulta clásica E(0) y apuesta su bit menos significativo"""

    name = "first-output-low-bit"

    def __init__(self):
        super().__init__(1, 0)

    def play(self, view: GameView, rng: np.random.Generator) -> Strategy:
        y = yield ClassicalQuery(0)
        yield FinalGuess(y & 1)


# ============================================================================
# JUEGOS DE REMUESTREO
# ============================================================================

class ResamplingProber(Distinguisher):
    """
    Fase 1: consulta el oráculo en q puntos base (aleatorios o fijados).
    Fase 2: vuelve a consultar los puntos revelados que ya había sondeado y
    apuesta 1 si alguno cambió.

    Sirve para el remuestreo de permutaciones (revela s0, s1) y de funciones
    (revela s).
    """

    name = "resampling-prober"

    def __init__(self, q: int, points: Optional[Sequence[int]] = None):
        super().__init__(0, q)
        self.points = None if points is None else tuple(int(p) for p in points)

    def play(self, view: GameView, rng: np.random.Generator) -> Strategy:
        size = 1 << view.input_bits
        points = list(self.points) if self.points is not None else _distinct_points(size, self.q_p, rng)
        points = points[: self.q_p]

        stored: Dict[int, int] = yield QuantumProgram(lambda ctx: {x: ctx.basis_query(x) for x in points})
        revealed = yield NextPhase()
        revealed = tuple(revealed) if isinstance(revealed, (tuple, list)) else (revealed,)
        targets = sorted({int(s) for s in revealed if int(s) in stored})

        changed = yield QuantumProgram(lambda ctx: any(ctx.basis_query(s) != stored[s] for s in targets))
        yield FinalGuess(int(changed))


# ============================================================================
# REPROGRAMACIÓN ARBITRARIA
# ============================================================================

def _single_point_setup(m: int, n: int, rng: np.random.Generator) -> ReprogrammingSetup:
    """F uniforme; B reprograma un punto uniforme a un valor uniforme (ε = 2^{−m})"""
    mask = (1 << n) - 1

    def reprogrammer(r: int) -> ReprogramSet:
        return ReprogramSet(((r >> n, r & mask),))

    return ReprogrammingSetup(
        function=sample_function(m, n, rng),
        reprogrammer=reprogrammer,
        randomness_bits=m + n,
        epsilon_bound=2.0**-m,
    )


def _decode(r: int, n: int) -> Tuple[int, int]:
    return r >> n, r & ((1 << n) - 1)


class FixedPointReprogrammer(ReprogrammingDistinguisher):
    """Consulta F en x* antes de conocer r y comprueba si x* fue reprogramado"""

    name = "fixed-point-reprogrammer"

    def __init__(self, m: int, n: Optional[int] = None, x_star: int = 0):
        super().__init__(0, 1)
        self.m = m
        self.n = m if n is None else n
        self.x_star = x_star

    def setup(self, rng: np.random.Generator) -> ReprogrammingSetup:
        return _single_point_setup(self.m, self.n, rng)

    def play(self, view: GameView, rng: np.random.Generator) -> Strategy:
        function = view.extra["function"]
        value = yield QuantumProgram(lambda ctx: ctx.basis_query(self.x_star))
        r = yield NextPhase()
        s, y = _decode(r, view.n)
        hit = s == self.x_star and value == y and y != int(function.table[s])
        yield FinalGuess(int(hit))


class GeometricReprogrammer(ReprogrammingDistinguisher):
    """
    Decide ronda a ronda si consulta: el control C empieza en |+⟩, de modo
    que cada pinching es una moneda justa. Tras una consulta mide Y, anota
    (x, F_b(x)) y prepara otra ronda; la primera vez que C sale 0 se detiene.
    """

    name = "geometric-reprogrammer"

    def __init__(self, m: int, n: Optional[int] = None, q_max: int = 16):
        super().__init__(0, q_max)
        self.m = m
        self.n = m if n is None else n

    def setup(self, rng: np.random.Generator) -> ReprogrammingSetup:
        return _single_point_setup(self.m, self.n, rng)

    def _program(self, ctx, m: int, n: int) -> List[Tuple[int, int]]:
        registers = (("c", 1), ("x", m), ("y", n))
        records: List[Tuple[int, int]] = []
        current = {"x": 0, "stopped": False}

        def prepare(active: bool) -> StateVector:
            current["x"] = int(ctx.rng.integers(0, 1 << m))
            state = ctx.fresh_state(*registers, values={"x": current["x"]})
            return apply_hadamard(state, "c") if active else state

        def phi(state: StateVector, round_index: int, rng: np.random.Generator) -> None:
            if current["stopped"]:
                return
            if probability_of(state, "c", 1) < 0.5:
                current["stopped"] = True
                state.amplitudes[:] = prepare(False).amplitudes
                return
            x = current["x"]
            records.append((x, ctx.measure(state, "y")))
            state.amplitudes[:] = prepare(True).amplitudes

        run_adaptive_rounds(
            prepare(True),
            "c",
            lambda state: ctx.controlled_oracle(state, "c", "x", "y"),
            phi,
            self.q_p,
            ctx.rng,
        )
        return records

    def play(self, view: GameView, rng: np.random.Generator) -> Strategy:
        function = view.extra["function"]
        records = yield QuantumProgram(lambda ctx: self._program(ctx, view.input_bits, view.n))
        r = yield NextPhase()
        s, y = _decode(r, view.n)
        hit = any(x == s and value == y and y != int(function.table[s]) for x, value in records)
        yield FinalGuess(int(hit))


# ============================================================================
# CIFRADO DE EVEN-MANSOUR
# ============================================================================

class TwoQueryProbe(Distinguisher):
    """
    Adversario fijo de dos consultas clásicas y dos cuánticas usado en las
    pruebas de equivalencia de híbridos: sondea P en un punto aleatorio,
    consulta E(0), invierte la respuesta con P^{-1} y hace una segunda
    consulta clásica (adelante en 1 o inversa en y1 ⊕ 1).
    """

    name = "two-query-probe"

    def __init__(self, inverse_second: bool = False):
        super().__init__(2, 2)
        self.inverse_second = inverse_second

    def play(self, view: GameView, rng: np.random.Generator) -> Strategy:
        u = int(rng.integers(0, 1 << view.n))
        a = yield QuantumProgram(lambda ctx: ctx.basis_query(u))
        y1 = yield ClassicalQuery(0)
        w = yield QuantumProgram(lambda ctx: ctx.basis_query(y1, inverse=True))
        if self.inverse_second:
            second = yield ClassicalQuery(y1 ^ 1, Direction.INVERSE)
        else:
            second = yield ClassicalQuery(1)
        yield FinalGuess(_parity(a, y1, w, second))


class ClassicalProber(Distinguisher):
    """
    q_E consultas clásicas hacia adelante en puntos distintos al azar y q_P
    consultas base a P concentradas en una sola etapa (`probe_stage`, por
    defecto la última).
    """

    name = "classical-prober"

    def __init__(self, q_e: int, q_p: int, probe_stage: Optional[int] = None):
        super().__init__(q_e, q_p)
        self.probe_stage = q_e if probe_stage is None else probe_stage

    def play(self, view: GameView, rng: np.random.Generator) -> Strategy:
        size = 1 << view.n
        xs = _distinct_points(size, self.q_e, rng)
        us = [int(u) for u in rng.integers(0, size, size=self.q_p)]
        seen: List[int] = []
        for stage in range(len(xs) + 1):
            if stage == self.probe_stage and us:
                probes = yield QuantumProgram(lambda ctx: [ctx.basis_query(u) for u in us])
                seen.extend(probes)
            if stage < len(xs):
                seen.append((yield ClassicalQuery(xs[stage])))
        yield FinalGuess(_parity(*seen))


class CollisionProber(Distinguisher):
    """
    Consulta E en q_E puntos y el oráculo público en q_P puntos; apuesta 1 si
    alguna salida de E coincide con alguna salida del oráculo público.
    """

    name = "collision-prober"

    def play(self, view: GameView, rng: np.random.Generator) -> Strategy:
        size = 1 << view.n
        xs = _distinct_points(size, self.q_e, rng)
        us = _distinct_points(size, self.q_p, rng)
        public = []
        if us:
            public = yield QuantumProgram(lambda ctx: [ctx.basis_query(u) for u in us])
        cipher = []
        for x in xs:
            cipher.append((yield ClassicalQuery(x)))
        yield FinalGuess(int(bool(set(public) & set(cipher))))
