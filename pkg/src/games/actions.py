"""
Protocolo entre juegos y distinguidores

Un distinguidor es un generador: emite acciones con `yield` y recibe la
respuesta del juego como valor de la expresión `yield`.

    def play(self, view, rng):
        y = yield ClassicalQuery(0)
        sample = yield QuantumProgram(lambda ctx: ...)
        yield FinalGuess(y & 1)

- ClassicalQuery → respuesta entera (y hacia adelante, x en inversa)
- QuantumProgram → lo que devuelva `run(ctx)`
- NextPhase → lo que revele el juego al cambiar de fase
- FinalGuess → termina la partida
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, ClassVar, Dict, Generator, Optional, Union

import numpy as np

from ..utils.errors import ProtocolError


class Direction(str, Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


@dataclass(frozen=True)
class ClassicalQuery:
    value: int
    direction: Direction = Direction.FORWARD


@dataclass(frozen=True)
class QuantumProgram:
    """Programa cuántico; recibe un `QuantumContext` con el oráculo vigente"""

    run: Callable[[Any], Any]


@dataclass(frozen=True)
class NextPhase:
    pass


@dataclass(frozen=True)
class FinalGuess:
    bit: int

    def __post_init__(self):
        if self.bit not in (0, 1):
            raise ProtocolError(f"La apuesta final debe ser 0 o 1, no {self.bit}")


Action = Union[ClassicalQuery, QuantumProgram, NextPhase, FinalGuess]
Strategy = Generator[Action, Any, None]


@dataclass(frozen=True)
class GameView:
    """Lo que el distinguidor sabe del juego antes de empezar"""

    game: str
    n: int
    m: Optional[int] = None
    allow_inverse: bool = True
    keyed_quantum: bool = False
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def input_bits(self) -> int:
        return self.n if self.m is None else self.m


class Distinguisher(ABC):
    """
    Estrategia de un solo uso: la fábrica crea una instancia nueva por ensayo.

    `q_e` y `q_p` son los presupuestos declarados de consultas clásicas y
    cuánticas; el juego los hace cumplir.
    """

    name: ClassVar[str] = "distinguisher"

    def __init__(self, q_e: int = 0, q_p: int = 0):
        self.q_e = int(q_e)
        self.q_p = int(q_p)

    @abstractmethod
    def play(self, view: GameView, rng: np.random.Generator) -> Strategy:
        """Generador de acciones; `rng` es el flujo aleatorio propio del distinguidor"""

    def __repr__(self) -> str:
        return f"{type(self).__name__}(q_e={self.q_e}, q_p={self.q_p})"
