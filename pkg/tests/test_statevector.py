"""
Tests del simulador de vectores de estado
"""
import math

import numpy as np
import pytest
from scipy import stats

from src.config import settings
from src.quantum.adaptive import run_adaptive_rounds
from src.quantum.statevector import (
    RegisterLayout,
    apply_controlled_xor_oracle,
    apply_diffusion,
    apply_hadamard,
    apply_phase_oracle,
    apply_xor_oracle,
    init_basis_state,
    measure_register,
    predicate_mask,
    probability_of,
    register_distribution,
    states_close,
    uniform_superposition,
)
from src.utils.errors import QubitBudgetError, RegisterError, WidthError


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# ============================================================================
# TESTS DE LAYOUT E INICIALIZACIÓN
# ============================================================================

def test_layout_rejects_duplicate_names():
    """Test de nombres de registro repetidos"""
    with pytest.raises(RegisterError):
        RegisterLayout.of(("x", 2), ("x", 3))


def test_layout_rejects_empty_register():
    """Test de registro sin qubits"""
    with pytest.raises(RegisterError):
        RegisterLayout.of(("x", 0))


def test_layout_respects_qubit_cap(monkeypatch):
    """Test del límite de qubits leído en tiempo de llamada"""
    monkeypatch.setattr(settings, "MAX_QUBITS", 6)
    with pytest.raises(QubitBudgetError):
        RegisterLayout.of(("x", 4), ("y", 3))


def test_unknown_register():
    """Test de registro desconocido"""
    layout = RegisterLayout.of(("x", 2))
    with pytest.raises(RegisterError):
        layout.axis("y")


def test_init_basis_state_places_amplitude():
    """Test del estado base: registro 0 es el más significativo"""
    layout = RegisterLayout.of(("x", 2), ("y", 3))
    state = init_basis_state(layout, {"x": 2, "y": 5})
    index = (2 << 3) | 5
    assert state.amplitudes[index] == 1.0
    assert state.norm_squared() == pytest.approx(1.0)


def test_init_basis_state_rejects_wide_value():
    """Test de valor que no cabe en el registro"""
    layout = RegisterLayout.of(("x", 2))
    with pytest.raises(WidthError):
        init_basis_state(layout, {"x": 4})


# ============================================================================
# TESTS DE COMPUERTAS Y ORÁCULOS
# ============================================================================

def test_hadamard_gives_uniform_distribution():
    """Test de Hadamard sobre |0⟩"""
    layout = RegisterLayout.of(("x", 3), ("y", 2))
    state = apply_hadamard(init_basis_state(layout), "x")
    distribution = register_distribution(state, "x")
    np.testing.assert_allclose(distribution, np.full(8, 1 / 8))
    assert probability_of(state, "y", 0) == pytest.approx(1.0)


def test_hadamard_is_involution(rng):
    """Test de H·H = I"""
    layout = RegisterLayout.of(("a", 2), ("x", 3), ("b", 1))
    state = uniform_superposition(layout, ["a", "b"])
    apply_hadamard(state, "x")
    original = state.copy()
    apply_hadamard(state, "x")
    apply_hadamard(state, "x")
    assert states_close(state, original, tol=1e-12)


def test_xor_oracle_maps_basis_states():
    """Test de |x⟩|y⟩ ↦ |x⟩|y ⊕ f(x)⟩"""
    layout = RegisterLayout.of(("x", 2), ("y", 2))
    table = np.array([3, 0, 2, 1])
    for x in range(4):
        for y in range(4):
            state = apply_xor_oracle(init_basis_state(layout, {"x": x, "y": y}), "x", "y", table)
            assert probability_of(state, "y", y ^ table[x]) == pytest.approx(1.0)
            assert probability_of(state, "x", x) == pytest.approx(1.0)


def test_xor_oracle_involution_and_norm(rng):
    """Test de que el oráculo XOR es su propia inversa y preserva la norma"""
    layout = RegisterLayout.of(("x", 4), ("y", 4))
    table = rng.permutation(16)
    state = apply_hadamard(init_basis_state(layout, {"y": 7}), "x")
    original = state.copy()
    apply_xor_oracle(state, "x", "y", table)
    assert state.norm_squared() == pytest.approx(1.0)
    apply_xor_oracle(state, "x", "y", table)
    assert states_close(state, original)


def test_xor_oracle_rejects_wrong_table():
    """Test de tabla incompatible con los anchos"""
    layout = RegisterLayout.of(("x", 2), ("y", 1))
    state = init_basis_state(layout)
    with pytest.raises(WidthError):
        apply_xor_oracle(state, "x", "y", np.array([0, 1, 2, 3]))
    with pytest.raises(WidthError):
        apply_xor_oracle(state, "x", "y", np.array([0, 1]))


def test_xor_oracle_same_register():
    """Test de entrada y salida en el mismo registro"""
    layout = RegisterLayout.of(("x", 2))
    with pytest.raises(RegisterError):
        apply_xor_oracle(init_basis_state(layout), "x", "x", np.zeros(4, dtype=int))


def test_controlled_oracle_only_acts_on_control_one():
    """Test del oráculo controlado"""
    layout = RegisterLayout.of(("c", 1), ("x", 2), ("y", 2))
    table = np.array([1, 2, 3, 0])
    off = apply_controlled_xor_oracle(init_basis_state(layout, {"x": 1}), "c", "x", "y", table)
    assert probability_of(off, "y", 0) == pytest.approx(1.0)
    on = apply_controlled_xor_oracle(init_basis_state(layout, {"c": 1, "x": 1}), "c", "x", "y", table)
    assert probability_of(on, "y", 2) == pytest.approx(1.0)


def test_controlled_oracle_needs_single_qubit_control():
    """Test de control de más de un qubit"""
    layout = RegisterLayout.of(("c", 2), ("x", 1), ("y", 1))
    with pytest.raises(RegisterError):
        apply_controlled_xor_oracle(init_basis_state(layout), "c", "x", "y", np.array([0, 1]))


def test_phase_oracle_equals_xor_on_minus(rng):
    """Test de la equivalencia fase/XOR con el registro de salida en |−⟩"""
    layout = RegisterLayout.of(("x", 4), ("y", 1))
    predicate = rng.integers(0, 2, size=16)
    xor_state = apply_hadamard(init_basis_state(layout, {"y": 1}), "y")
    apply_hadamard(xor_state, "x")
    phase_state = xor_state.copy()
    apply_xor_oracle(xor_state, "x", "y", predicate)
    apply_phase_oracle(phase_state, "x", predicate.astype(bool))
    assert states_close(xor_state, phase_state)


def test_predicate_mask_accepts_scalar_callables():
    """Test de predicados escalares y vectorizados"""
    expected = np.array([x % 3 == 0 for x in range(8)])
    np.testing.assert_array_equal(predicate_mask(lambda x: x % 3 == 0, 8), expected)
    np.testing.assert_array_equal(predicate_mask(lambda x: int(x) % 3 == 0, 8), expected)
    with pytest.raises(WidthError):
        predicate_mask(np.ones(4, dtype=bool), 8)


def test_diffusion_single_grover_step():
    """Test de una iteración de Grover con un marcado sobre 4 elementos (éxito exacto)"""
    layout = RegisterLayout.of(("u", 2))
    state = apply_hadamard(init_basis_state(layout), "u")
    apply_phase_oracle(state, "u", lambda u: u == 3)
    apply_diffusion(state, "u")
    assert probability_of(state, "u", 3) == pytest.approx(1.0)


# ============================================================================
# TESTS DE MEDICIÓN
# ============================================================================

def test_measure_collapses_state(rng):
    """Test de colapso y renormalización"""
    layout = RegisterLayout.of(("x", 3), ("y", 3))
    state = apply_hadamard(init_basis_state(layout), "x")
    apply_xor_oracle(state, "x", "y", np.arange(8))
    outcome, collapsed = measure_register(state, "x", rng)
    assert collapsed.norm_squared() == pytest.approx(1.0)
    assert probability_of(collapsed, "x", outcome) == pytest.approx(1.0)
    assert probability_of(collapsed, "y", outcome) == pytest.approx(1.0)


def test_measure_follows_born_rule():
    """Test de frecuencias de medición frente a |amplitud|²"""
    layout = RegisterLayout.of(("x", 1))
    amplitudes = np.array([math.sqrt(0.2), math.sqrt(0.8)], dtype=complex)
    rng = np.random.default_rng(7)
    counts = np.zeros(2, dtype=int)
    trials = 4000
    for _ in range(trials):
        state = init_basis_state(layout)
        state.amplitudes[:] = amplitudes
        outcome, _ = measure_register(state, "x", rng)
        counts[outcome] += 1
    assert stats.chisquare(counts, f_exp=[0.2 * trials, 0.8 * trials]).pvalue > 1e-3


# ============================================================================
# TESTS DEL MODELO ADAPTATIVO
# ============================================================================

def test_adaptive_rounds_without_control_make_no_queries(rng):
    """Test de control siempre en |0⟩: ninguna consulta"""
    layout = RegisterLayout.of(("c", 1), ("x", 2), ("y", 2))
    calls = []
    run = run_adaptive_rounds(
        init_basis_state(layout),
        "c",
        lambda state: apply_controlled_xor_oracle(state, "c", "x", "y", np.arange(4)),
        lambda state, index, stream: calls.append(index),
        5,
        rng,
    )
    assert run.queries == 0
    assert run.expected_queries == pytest.approx(0.0)
    assert calls == [0, 1, 2, 3, 4]


def test_adaptive_rounds_count_control_ones(rng):
    """Test de control siempre en |1⟩: q_max consultas"""
    layout = RegisterLayout.of(("c", 1), ("x", 2), ("y", 2))
    run = run_adaptive_rounds(
        init_basis_state(layout, {"c": 1}),
        "c",
        lambda state: apply_controlled_xor_oracle(state, "c", "x", "y", np.arange(4)),
        lambda state, index, stream: None,
        4,
        rng,
    )
    assert run.queries == 4
    assert run.outcomes == [1, 1, 1, 1]
    assert run.expected_queries == pytest.approx(4.0)
