"""
Fórmulas de cota de ventaja

Cada fórmula se registra con `@bound_formula("id")` y recibe sus parámetros
por nombre. `compute_bound` recorta el valor a [0, 1]; `evaluate_bound`
devuelve además el valor crudo y si la cota es vacía (≥ 1).
"""
import inspect
import math
from dataclasses import dataclass
from typing import Callable, Dict

from ..config import settings
from ..utils.errors import BoundParameterError, UnknownFormulaError

BOUND_FORMULAS: Dict[str, Callable[..., float]] = {}


def bound_formula(formula_id: str):
    def register(fn: Callable[..., float]) -> Callable[..., float]:
        BOUND_FORMULAS[formula_id] = fn
        return fn

    return register


@dataclass(frozen=True)
class BoundValue:
    raw: float
    clipped: float

    @property
    def vacuous(self) -> bool:
        return self.raw >= 1.0


# ============================================================================
# CIFRADO COMPLETO
# ============================================================================

@bound_formula("em-two-way")
def _em_two_way(n: int, q_e: float, q_p: float) -> float:
    """10·2^{−n/2}(q_E√q_P + q_P√q_E)"""
    return 10.0 * 2.0 ** (-n / 2) * (q_e * math.sqrt(q_p) + q_p * math.sqrt(q_e))


@bound_formula("em-two-way-chain")
def _em_two_way_chain(n: int, q_e: float, q_p: float) -> float:
    """Suma de la cadena de híbridos antes de simplificar"""
    return 2.0 * q_e**2 * 2.0**-n + 2.0 ** (-n / 2) * (
        8.0 * q_e * math.sqrt(q_p) + 2.0 * q_p * math.sqrt(2.0 * q_e)
    )


@bound_formula("em-forward-only")
def _em_forward_only(n: int, q_e: float, q_p: float) -> float:
    """2^{−n/2}(2q_E√q_F + 2q_F√q_E), con q_p en el papel de q_F"""
    return 2.0 ** (-n / 2) * (2.0 * q_e * math.sqrt(q_p) + 2.0 * q_p * math.sqrt(q_e))


# ============================================================================
# REMUESTREO Y REPROGRAMACIÓN
# ============================================================================

@bound_formula("fn-resampling")
def _fn_resampling(m: int, q: float) -> float:
    return 1.5 * math.sqrt(q / 2.0**m)


@bound_formula("arbitrary-reprogramming")
def _arbitrary_reprogramming(q: float, epsilon: float) -> float:
    return 2.0 * q * math.sqrt(epsilon)


@bound_formula("perm-resampling")
def _perm_resampling(n: int, q: float) -> float:
    return 4.0 * math.sqrt(q / 2.0**n)


# ============================================================================
# CADENA DE HÍBRIDOS
# ============================================================================

@bound_formula("hybrid-blinding-step")
def _hybrid_blinding_step(n: int, j: int, q_stage: float) -> float:
    """|Pr[H'_j] − Pr[H_{j+1}]| con q_stage = q_{P,j+1}"""
    return 2.0 * q_stage * math.sqrt(2.0 * (j + 1) / 2.0**n)


@bound_formula("hybrid-resampling-step")
def _hybrid_resampling_step(n: int, q_e: float, q_p: float) -> float:
    """|Pr[H_j] − Pr[H'_j]|"""
    return 8.0 * math.sqrt(q_p / 2.0**n) + 2.0 * q_e * 2.0**-n


@bound_formula("fwd-blinding-step")
def _fwd_blinding_step(n: int, j: int, q_stage: float) -> float:
    return 2.0 * q_stage * math.sqrt((j + 1) / 2.0**n)


@bound_formula("fwd-resampling-step")
def _fwd_resampling_step(n: int, q_p: float) -> float:
    return 1.5 * math.sqrt(q_p / 2.0**n)


@bound_formula("bad-collision")
def _bad_collision(n: int, j: int) -> float:
    """Cota de bad1 y de bad2"""
    return j / 2.0**n


@bound_formula("bad-late-query")
def _bad_late_query(n: int, q_e: float, q_p: float, j: int) -> float:
    """Cota de bad3"""
    return (q_e - j) / 2.0**n + 4.0 * math.sqrt(q_p / 2.0**n)


@bound_formula("bad-union")
def _bad_union(n: int, q_e: float, q_p: float) -> float:
    return 2.0 * q_e / 2.0**n + 4.0 * math.sqrt(q_p / 2.0**n)


@bound_formula("expt-resampling")
def _expt_resampling(n: int, q_p: float) -> float:
    """|Pr[H_j] − Pr[Expt_j]|"""
    return 4.0 * math.sqrt(q_p / 2.0**n)


# ============================================================================
# REFERENCIAS
# ============================================================================

@bound_formula("claw-scaling")
def _claw_scaling(n: int, q_e: float, q_p: float) -> float:
    """Escala q_P²·q_E/2^n de la ventaja de los ataques (no es una cota)"""
    return q_p**2 * q_e / 2.0**n


@bound_formula("equivalence")
def _equivalence() -> float:
    return settings.TV_THRESHOLD


@bound_formula("trivial")
def _trivial() -> float:
    return 1.0


def evaluate_bound(formula: str, **params: float) -> BoundValue:
    """
    Evalúa una fórmula registrada.

    Raises:
        UnknownFormulaError: Identificador no registrado
        BoundParameterError: Parámetro negativo, ausente o sobrante
    """
    fn = BOUND_FORMULAS.get(formula)
    if fn is None:
        raise UnknownFormulaError(f"Fórmula de cota desconocida: '{formula}'")
    negative = {name: value for name, value in params.items() if value is None or value < 0}
    if negative:
        raise BoundParameterError(f"Parámetros negativos o nulos en '{formula}': {negative}")
    expected = set(inspect.signature(fn).parameters)
    supplied = {name: value for name, value in params.items() if name in expected}
    missing = expected - set(supplied)
    if missing:
        raise BoundParameterError(f"Faltan parámetros para '{formula}': {sorted(missing)}")
    raw = float(fn(**supplied))
    return BoundValue(raw=raw, clipped=min(1.0, max(0.0, raw)))


def compute_bound(formula: str, **params: float) -> float:
    """Valor de la cota recortado a [0, 1]"""
    return evaluate_bound(formula, **params).clipped
