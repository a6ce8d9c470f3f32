"""
Simulador de estado puro por registros con nombre

Las amplitudes viven en un arreglo plano complejo indexado por la
concatenación de los bits de cada registro en orden de declaración (el
registro 0 es el más significativo). Internamente cada registro es un eje de
tamaño 2^ancho, lo que permite aplicar oráculos y mediciones con operaciones
vectorizadas de numpy sin recorrer estados base.

Todas las operaciones mutan el estado en sitio y lo devuelven; los valores de
registro son enteros cuyo bit menos significativo es el último qubit.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Optional, Tuple, Union

import numpy as np

from ..config import settings
from ..utils.errors import (
    QubitBudgetError,
    RegisterError,
    SimulatorError,
    WidthError,
)

logger = logging.getLogger(__name__)

INV_SQRT2 = 1.0 / math.sqrt(2.0)

Predicate = Union[Callable[[np.ndarray], np.ndarray], Callable[[int], bool], np.ndarray]


@dataclass(frozen=True)
class RegisterLayout:
    """Lista ordenada de registros (nombre, ancho en qubits)"""

    registers: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.registers]
        if len(set(names)) != len(names):
            raise RegisterError(f"Nombres de registro repetidos: {names}")
        for name, width in self.registers:
            if width < 1:
                raise RegisterError(f"El registro '{name}' debe tener al menos un qubit")
        if self.total_qubits > settings.MAX_QUBITS:
            raise QubitBudgetError(
                f"{self.total_qubits} qubits excede el límite del simulador ({settings.MAX_QUBITS})"
            )

    @classmethod
    def of(cls, *registers: Tuple[str, int]) -> "RegisterLayout":
        return cls(tuple((str(name), int(width)) for name, width in registers))

    @property
    def total_qubits(self) -> int:
        return sum(width for _, width in self.registers)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.registers)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(1 << width for _, width in self.registers)

    def axis(self, name: str) -> int:
        for index, (reg_name, _) in enumerate(self.registers):
            if reg_name == name:
                return index
        raise RegisterError(f"Registro desconocido: '{name}'")

    def width(self, name: str) -> int:
        return self.registers[self.axis(name)][1]


class StateVector:
    """Vector de estado normalizado sobre un `RegisterLayout`"""

    def __init__(self, layout: RegisterLayout, amplitudes: np.ndarray):
        expected = 1 << layout.total_qubits
        if amplitudes.shape != (expected,):
            raise WidthError(f"Se esperaban {expected} amplitudes y hay {amplitudes.shape}")
        self.layout = layout
        self.amplitudes = np.ascontiguousarray(amplitudes, dtype=np.complex128)

    @property
    def tensor(self) -> np.ndarray:
        """Vista con un eje por registro (escrituras afectan al estado)"""
        return self.amplitudes.reshape(self.layout.shape)

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def copy(self) -> "StateVector":
        return StateVector(self.layout, self.amplitudes.copy())

    def __repr__(self) -> str:
        return f"StateVector({self.layout.registers}, norm²={self.norm_squared():.12f})"


def _check_norm(state: StateVector, operation: str) -> StateVector:
    drift = abs(state.norm_squared() - 1.0)
    if drift > settings.NORM_TOLERANCE:
        raise SimulatorError(f"Deriva de norma {drift:.3e} tras {operation}")
    return state


def _check_value(layout: RegisterLayout, name: str, value: int) -> int:
    width = layout.width(name)
    value = int(value)
    if not 0 <= value < (1 << width):
        raise WidthError(f"El valor {value:#b} no cabe en el registro '{name}' de {width} qubits")
    return value


def predicate_mask(predicate: Predicate, size: int) -> np.ndarray:
    """Evalúa un predicado sobre 0..size-1 como máscara booleana"""
    if isinstance(predicate, np.ndarray):
        mask = predicate.astype(bool)
    else:
        domain = np.arange(size, dtype=np.int64)
        try:
            mask = np.asarray(predicate(domain), dtype=bool)
        except (TypeError, ValueError):
            mask = None
        if mask is None or mask.shape != (size,):
            mask = np.fromiter((bool(predicate(int(x))) for x in range(size)), dtype=bool, count=size)
    if mask.shape != (size,):
        raise WidthError(f"El predicado debe cubrir {size} valores")
    return mask


def _check_table(table: np.ndarray, in_width: int, out_width: int) -> np.ndarray:
    table = np.asarray(table, dtype=np.int64)
    if table.shape != (1 << in_width,):
        raise WidthError(
            f"Tabla de tamaño {table.shape[0] if table.ndim else 0} incompatible con registro de {in_width} qubits"
        )
    if table.size and (table.min() < 0 or table.max() >= (1 << out_width)):
        raise WidthError(f"La tabla produce valores fuera de {out_width} bits")
    return table


# ============================================================================
# PREPARACIÓN
# ============================================================================

def init_basis_state(layout: RegisterLayout, values: Optional[Dict[str, int]] = None) -> StateVector:
    """
    Estado base con amplitud 1 en los valores dados (0 para registros omitidos).

    Raises:
        WidthError: Algún valor no cabe en su registro
        RegisterError: Registro desconocido
    """
    values = values or {}
    index = [0] * len(layout.registers)
    for name, value in values.items():
        index[layout.axis(name)] = _check_value(layout, name, value)
    amplitudes = np.zeros(1 << layout.total_qubits, dtype=np.complex128)
    amplitudes[np.ravel_multi_index(tuple(index), layout.shape)] = 1.0
    return StateVector(layout, amplitudes)


# ============================================================================
# COMPUERTAS Y ORÁCULOS
# ============================================================================

def apply_hadamard(state: StateVector, register: str) -> StateVector:
    """H^{⊗w} sobre el registro, un qubit a la vez (mariposa de Walsh-Hadamard)"""
    axis = state.layout.axis(register)
    shape = state.layout.shape
    pre = int(np.prod(shape[:axis], dtype=np.int64))
    dim = shape[axis]
    post = int(np.prod(shape[axis + 1:], dtype=np.int64))
    stride = 1
    while stride < dim:
        view = state.amplitudes.reshape(pre, dim // (2 * stride), 2, stride, post)
        low = view[:, :, 0].copy()
        high = view[:, :, 1]
        view[:, :, 0] = (low + high) * INV_SQRT2
        view[:, :, 1] = (low - high) * INV_SQRT2
        stride *= 2
    return _check_norm(state, "hadamard")


def _xor_into(tensor: np.ndarray, in_axis: int, out_axis: int, table: np.ndarray) -> None:
    moved = np.moveaxis(tensor, (in_axis, out_axis), (-2, -1))
    size_out = moved.shape[-1]
    gather = np.arange(size_out, dtype=np.int64)[None, :] ^ table[:, None]
    gather = gather.reshape((1,) * (moved.ndim - 2) + gather.shape)
    moved[...] = np.take_along_axis(moved, gather, axis=-1)


def apply_xor_oracle(state: StateVector, in_reg: str, out_reg: str, f: np.ndarray) -> StateVector:
    """
    |x⟩|y⟩ ↦ |x⟩|y ⊕ f(x)⟩.

    Raises:
        WidthError: Tabla incompatible con los anchos de registro
    """
    layout = state.layout
    in_axis, out_axis = layout.axis(in_reg), layout.axis(out_reg)
    if in_axis == out_axis:
        raise RegisterError("Los registros de entrada y salida deben ser distintos")
    table = _check_table(f, layout.width(in_reg), layout.width(out_reg))
    _xor_into(state.tensor, in_axis, out_axis, table)
    return _check_norm(state, "oráculo XOR")


def apply_controlled_xor_oracle(
    state: StateVector, ctrl_reg: str, in_reg: str, out_reg: str, f: np.ndarray
) -> StateVector:
    """|c⟩|x⟩|y⟩ ↦ |c⟩|x⟩|y ⊕ c·f(x)⟩ con c un único qubit"""
    layout = state.layout
    if layout.width(ctrl_reg) != 1:
        raise RegisterError(f"El registro de control '{ctrl_reg}' debe tener un qubit")
    ctrl_axis = layout.axis(ctrl_reg)
    in_axis, out_axis = layout.axis(in_reg), layout.axis(out_reg)
    if len({ctrl_axis, in_axis, out_axis}) != 3:
        raise RegisterError("Control, entrada y salida deben ser registros distintos")
    table = _check_table(f, layout.width(in_reg), layout.width(out_reg))

    branch = np.moveaxis(state.tensor, ctrl_axis, 0)[1]

    def shifted(axis: int) -> int:
        return axis if axis < ctrl_axis else axis - 1

    _xor_into(branch, shifted(in_axis), shifted(out_axis), table)
    return _check_norm(state, "oráculo XOR controlado")


def apply_phase_oracle(state: StateVector, reg: str, predicate: Predicate) -> StateVector:
    """Multiplica la amplitud de |x⟩ por (−1)^{predicate(x)}"""
    axis = state.layout.axis(reg)
    mask = predicate_mask(predicate, state.layout.shape[axis])
    signs = np.where(mask, -1.0, 1.0)
    broadcast = [1] * len(state.layout.registers)
    broadcast[axis] = signs.size
    tensor = state.tensor
    tensor *= signs.reshape(broadcast)
    return _check_norm(state, "oráculo de fase")


def apply_diffusion(state: StateVector, reg: str) -> StateVector:
    """Reflexión respecto de la superposición uniforme del registro: 2|s⟩⟨s| − I"""
    axis = state.layout.axis(reg)
    tensor = state.tensor
    mean = tensor.mean(axis=axis, keepdims=True)
    tensor *= -1.0
    tensor += 2.0 * mean
    return _check_norm(state, "difusión")


# ============================================================================
# MEDICIÓN
# ============================================================================

def register_distribution(state: StateVector, reg: str) -> np.ndarray:
    """Probabilidades marginales de cada valor del registro"""
    axis = state.layout.axis(reg)
    weights = np.abs(state.tensor) ** 2
    other = tuple(a for a in range(weights.ndim) if a != axis)
    return weights.sum(axis=other) if other else weights


def probability_of(state: StateVector, reg: str, value: int) -> float:
    """Σ |amplitud|² sobre los estados base con `reg = value`"""
    value = _check_value(state.layout, reg, value)
    return float(register_distribution(state, reg)[value])


def measure_register(state: StateVector, reg: str, rng: np.random.Generator) -> Tuple[int, StateVector]:
    """
    Mide el registro con probabilidades de Born y colapsa el estado.

    Returns:
        (resultado, estado colapsado y renormalizado)

    Raises:
        SimulatorError: Rama de probabilidad nula (estado no normalizado)
    """
    axis = state.layout.axis(reg)
    probabilities = register_distribution(state, reg)
    total = probabilities.sum()
    if total <= 0.0:
        raise SimulatorError("Estado nulo al medir")
    probabilities = probabilities / total
    outcome = int(rng.choice(probabilities.size, p=probabilities))
    weight = probabilities[outcome]
    if weight <= 0.0:
        raise SimulatorError(f"Rama degenerada para el resultado {outcome}")

    moved = np.moveaxis(state.tensor, axis, 0)
    keep = moved[outcome].copy()
    moved[...] = 0.0
    moved[outcome] = keep / math.sqrt(weight * total)
    return outcome, _check_norm(state, "medición")


def states_close(a: StateVector, b: StateVector, tol: Optional[float] = None) -> bool:
    """Desviación máxima de amplitudes ≤ tol (sin libertad de fase global)"""
    tol = settings.STATE_TOLERANCE if tol is None else tol
    if a.layout.shape != b.layout.shape:
        return False
    return bool(np.max(np.abs(a.amplitudes - b.amplitudes)) <= tol)


def uniform_superposition(layout: RegisterLayout, registers: Iterable[str]) -> StateVector:
    """|0…0⟩ con Hadamard en los registros indicados"""
    state = init_basis_state(layout)
    for name in registers:
        apply_hadamard(state, name)
    return state
