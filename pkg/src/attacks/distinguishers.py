"""
Ataques como distinguidores y ajuste de escalado
"""
import math
from typing import Iterable, Tuple

import numpy as np

from ..config import settings
from ..games.actions import Distinguisher
from ..games.strategies import ZeroQueryGuesser
from ..utils.errors import ConfigError
from .birthday import BirthdayKeyRecovery
from .claw import ClawKeyRecovery
from .simon import SimonKeyRecovery

ATTACK_IDS = ("simon-q2", "q1-claw", "birthday")


def attack_as_distinguisher(
    attack_id: str, q_e: int, q_p: int, n: int, delta: int | None = None
) -> Distinguisher:
    """
    Envuelve un ataque con los recursos (q_E, q_P): apuesta 1 si y solo si
    recupera una clave que verifica. Sin recursos suficientes para un
    intento completo apuesta siempre 0.

    `simon-q2` solo tiene sentido en juegos con acceso cuántico a E.
    """
    delta = settings.CLAW_DELTA if delta is None else delta
    if attack_id == "q1-claw":
        return ClawKeyRecovery.with_resources(n, q_e, q_p, delta)
    if attack_id == "birthday":
        return BirthdayKeyRecovery.with_resources(n, q_e, q_p, delta)
    if attack_id == "simon-q2":
        iterations = min((q_p - 6) // 7, q_e - 3)
        if iterations < 1:
            return ZeroQueryGuesser(0)
        return SimonKeyRecovery(n, iterations)
    raise ConfigError(f"Ataque desconocido: '{attack_id}' (opciones: {', '.join(ATTACK_IDS)})")


def loglog_slope(points: Iterable[Tuple[float, float]]) -> float:
    """
    Pendiente por mínimos cuadrados de log y contra log x; se descartan los
    puntos no positivos.

    Raises:
        ConfigError: Menos de dos puntos utilizables
    """
    usable = [(math.log(x), math.log(y)) for x, y in points if x > 0 and y > 0]
    if len(usable) < 2:
        raise ConfigError("Se necesitan al menos dos puntos positivos para ajustar la pendiente")
    xs, ys = np.array(usable).T
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)
