"""
Motor de partidas: conduce al distinguidor, contabiliza consultas por etapa y
fase, y registra la transcripción clásica.

Cada juego concreto aporta un `OracleWorld` que decide cómo responder
consultas clásicas y qué tabla sirve el oráculo cuántico en cada momento.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..cipher.reprogramming import Transcript
from ..quantum.statevector import (
    RegisterLayout,
    StateVector,
    apply_controlled_xor_oracle,
    apply_phase_oracle,
    apply_xor_oracle,
    init_basis_state,
    measure_register,
    probability_of,
)
from ..utils.errors import (
    BudgetExceededError,
    ForbiddenQueryError,
    ProtocolError,
    RedundantQueryError,
    WidthError,
)
from .actions import (
    ClassicalQuery,
    Direction,
    Distinguisher,
    FinalGuess,
    GameView,
    NextPhase,
    QuantumProgram,
)

logger = logging.getLogger(__name__)


@dataclass
class BadFlags:
    bad1: bool = False
    bad2: bool = False
    bad3: bool = False

    def any(self) -> bool:
        return self.bad1 or self.bad2 or self.bad3


@dataclass
class GameTranscript:
    """Resultado completo de una partida"""

    classical_entries: Transcript
    directions: List[Direction]
    per_stage_quantum_counts: List[int]
    phase_quantum_counts: List[int]
    guess: int
    bad_flags: BadFlags = field(default_factory=BadFlags)
    keyed_quantum_queries: int = 0
    reveals: List[Any] = field(default_factory=list)

    @property
    def total_quantum(self) -> int:
        return sum(self.per_stage_quantum_counts)

    @property
    def classical_queries(self) -> int:
        return len(self.classical_entries)

    def view(self) -> Tuple:
        """Vista conjunta (apuesta, transcripción clásica) usada en comparaciones de distribución"""
        return (self.guess, self.classical_entries.entries, tuple(d.value for d in self.directions))


class OracleWorld:
    """Mundo base: sin consultas clásicas, sin fases extra, sin acceso cuántico a E"""

    allow_inverse: bool = True

    def __init__(self, in_bits: int, out_bits: Optional[int] = None):
        self.in_bits = in_bits
        self.out_bits = in_bits if out_bits is None else out_bits
        self.flags = BadFlags()

    def classical(self, query: ClassicalQuery, transcript: Transcript) -> int:
        raise ForbiddenQueryError("Este juego no ofrece oráculo clásico")

    def quantum_table(self, inverse: bool) -> np.ndarray:
        raise ForbiddenQueryError("Este juego no ofrece oráculo cuántico")

    def keyed_table(self, inverse: bool) -> np.ndarray:
        raise ForbiddenQueryError("El acceso cuántico a E solo existe en el modo diagnóstico Q2")

    def next_phase(self) -> Any:
        raise ProtocolError("Este juego no tiene fases adicionales")

    def phase_budget(self, phase: int, declared: int) -> Optional[int]:
        return declared


class QuantumContext:
    """
    Acceso del programa cuántico al oráculo vigente.

    Cada llamada a `oracle`, `controlled_oracle` o `basis_query` cuesta una
    consulta; `phase_query` cuesta 2·|shifts| (cálculo y descómputo).
    """

    def __init__(self, session: "GameSession"):
        self._session = session

    @property
    def in_bits(self) -> int:
        return self._session.world.in_bits

    @property
    def out_bits(self) -> int:
        return self._session.world.out_bits

    @property
    def rng(self) -> np.random.Generator:
        return self._session.adversary_rng

    def fresh_state(self, *registers: Tuple[str, int], values: Optional[dict] = None) -> StateVector:
        return init_basis_state(RegisterLayout.of(*registers), values)

    def oracle(self, state: StateVector, in_reg: str, out_reg: str, inverse: bool = False) -> StateVector:
        table = self._session.world.quantum_table(inverse)
        self._session.charge(1)
        return apply_xor_oracle(state, in_reg, out_reg, table)

    def controlled_oracle(
        self, state: StateVector, ctrl: str, in_reg: str, out_reg: str, inverse: bool = False
    ) -> StateVector:
        """Solo cuenta como consulta si la rama de control 1 tiene peso no nulo"""
        table = self._session.world.quantum_table(inverse)
        if probability_of(state, ctrl, 1) > 0.0:
            self._session.charge(1)
        return apply_controlled_xor_oracle(state, ctrl, in_reg, out_reg, table)

    def phase_query(
        self,
        state: StateVector,
        reg: str,
        predicate: Callable[[np.ndarray], np.ndarray],
        shifts: Sequence[int] = (0,),
        inverse: bool = False,
    ) -> StateVector:
        """Oráculo de fase sobre g(u) = ⊕_d O(u ⊕ d)"""
        table = self._session.world.quantum_table(inverse)
        self._session.charge(2 * len(shifts))
        values = self._session.shifted_values(table, tuple(int(s) for s in shifts))
        return apply_phase_oracle(state, reg, np.asarray(predicate(values), dtype=bool))

    def basis_query(self, x: int, inverse: bool = False) -> int:
        """Oráculo XOR sobre |x⟩|0⟩ seguido de la medición del registro de salida"""
        table = self._session.world.quantum_table(inverse)
        if not 0 <= x < table.size:
            raise WidthError(f"Consulta {x} fuera del dominio del oráculo")
        self._session.charge(1)
        return int(table[x])

    def keyed_oracle(self, state: StateVector, in_reg: str, out_reg: str, inverse: bool = False) -> StateVector:
        table = self._session.world.keyed_table(inverse)
        self._session.charge_keyed(1)
        return apply_xor_oracle(state, in_reg, out_reg, table)

    def measure(self, state: StateVector, reg: str) -> int:
        outcome, _ = measure_register(state, reg, self.rng)
        return outcome


class GameSession:
    """Una partida entre un distinguidor y un mundo"""

    def __init__(
        self,
        world: OracleWorld,
        adversary: Distinguisher,
        view: GameView,
        adversary_rng: np.random.Generator,
    ):
        self.world = world
        self.adversary = adversary
        self.view = view
        self.adversary_rng = adversary_rng
        self.transcript = Transcript(require_distinct_outputs=False, require_distinct_inputs=False)
        self.directions: List[Direction] = []
        self.stage_counts = [0]
        self.phase_counts = [0]
        self.phase = 0
        self.keyed = 0
        self.reveals: List[Any] = []
        self._shifted: dict = {}

    def shifted_values(self, table: np.ndarray, shifts: Tuple[int, ...]) -> np.ndarray:
        """⊕_d table[u ⊕ d] para todo u; se recalcula solo si la tabla vigente cambió"""
        cached = self._shifted.get(shifts)
        if cached is not None and cached[0] is table:
            return cached[1]
        domain = np.arange(table.size, dtype=np.int64)
        values = np.zeros(table.size, dtype=np.int64)
        for shift in shifts:
            values ^= table[domain ^ shift]
        self._shifted[shifts] = (table, values)
        return values

    # ------------------------------------------------------------------
    # Contabilidad
    # ------------------------------------------------------------------

    def charge(self, count: int) -> None:
        budget = self.world.phase_budget(self.phase, self.adversary.q_p)
        if budget is not None and self.phase_counts[-1] + count > budget:
            raise BudgetExceededError(
                f"{type(self.adversary).__name__} excede su presupuesto de {budget} consultas cuánticas"
            )
        self.stage_counts[-1] += count
        self.phase_counts[-1] += count

    def charge_keyed(self, count: int) -> None:
        if len(self.transcript) + self.keyed + count > self.adversary.q_e:
            raise BudgetExceededError(
                f"{type(self.adversary).__name__} excede su presupuesto de {self.adversary.q_e} consultas a E"
            )
        self.keyed += count

    # ------------------------------------------------------------------
    # Acciones
    # ------------------------------------------------------------------

    def _classical(self, query: ClassicalQuery) -> int:
        direction = Direction(query.direction)
        value = int(query.value)
        if direction is Direction.INVERSE and not self.world.allow_inverse:
            raise ForbiddenQueryError("Este juego solo admite consultas hacia adelante")
        if not 0 <= value < (1 << self.world.in_bits):
            raise WidthError(f"Consulta clásica {value} fuera de {self.world.in_bits} bits")
        if len(self.transcript) + self.keyed >= self.adversary.q_e:
            raise BudgetExceededError(
                f"{type(self.adversary).__name__} excede su presupuesto de {self.adversary.q_e} consultas clásicas"
            )
        known = self.transcript.has_input if direction is Direction.FORWARD else self.transcript.has_output
        if known(value):
            raise RedundantQueryError(f"Consulta redundante ({direction.value}, {value})")

        answer = int(self.world.classical(ClassicalQuery(value, direction), self.transcript))
        if direction is Direction.FORWARD:
            self.transcript.append(value, answer)
        else:
            self.transcript.append(answer, value)
        self.directions.append(direction)
        self.stage_counts.append(0)
        return answer

    def _next_phase(self) -> Any:
        revealed = self.world.next_phase()
        self.reveals.append(revealed)
        self.phase += 1
        self.phase_counts.append(0)
        return revealed

    def run(self) -> GameTranscript:
        strategy = self.adversary.play(self.view, self.adversary_rng)
        reply: Any = None
        guess: Optional[int] = None
        try:
            while guess is None:
                try:
                    action = strategy.send(reply)
                except StopIteration:
                    raise ProtocolError(f"{type(self.adversary).__name__} terminó sin apuesta final") from None
                if isinstance(action, FinalGuess):
                    guess = action.bit
                elif isinstance(action, ClassicalQuery):
                    reply = self._classical(action)
                elif isinstance(action, QuantumProgram):
                    reply = action.run(QuantumContext(self))
                elif isinstance(action, NextPhase):
                    reply = self._next_phase()
                else:
                    raise ProtocolError(f"Acción desconocida: {action!r}")
        finally:
            strategy.close()

        return GameTranscript(
            classical_entries=self.transcript,
            directions=self.directions,
            per_stage_quantum_counts=self.stage_counts,
            phase_quantum_counts=self.phase_counts,
            guess=guess,
            bad_flags=self.world.flags,
            keyed_quantum_queries=self.keyed,
            reveals=self.reveals,
        )


def play_game(
    world: OracleWorld, adversary: Distinguisher, view: GameView, adversary_rng: np.random.Generator
) -> GameTranscript:
    return GameSession(world, adversary, view, adversary_rng).run()
