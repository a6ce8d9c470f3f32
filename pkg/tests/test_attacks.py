"""
Tests de los ataques de recuperación de clave y su maquinaria
"""
import numpy as np
import pytest

from src.attacks import (
    BirthdayKeyRecovery,
    ClawKeyRecovery,
    GF2Matrix,
    SimonKeyRecovery,
    attack_as_distinguisher,
    canonical_points,
    classical_birthday_attack,
    claw_success_prediction,
    gf2_nullspace,
    gf2_rank,
    grover_iterations,
    grover_multi_target,
    grover_success_probability,
    loglog_slope,
    parity,
    play_attack,
    q1_claw_attack,
    simon_q2_attack,
    span,
)
from src.cipher import KeyDistribution, em_permutation, em_table, sample_key, sample_permutation
from src.games.strategies import ZeroQueryGuesser
from src.utils.errors import ConfigError, DegenerateDeltaError, VacuousPredicateError, WidthError
from src.utils.rng import derive_rng


def _instance(n, seed, trial=0):
    rng = derive_rng(seed, 0, 0, trial)
    permutation = sample_permutation(n, rng)
    key = sample_key(KeyDistribution.TWO_KEY, n, rng)
    return permutation, key, derive_rng(seed, 0, 1, trial)


# ============================================================================
# TESTS DE GF(2)
# ============================================================================

def test_parity():
    """Test del producto interno sobre GF(2)"""
    assert parity(0b1011, 0b0011) == 0
    assert parity(0b1011, 0b1000) == 1


def test_rank_and_nullspace():
    """Test de rango y núcleo de una matriz 2×3"""
    matrix = GF2Matrix(3, [0b011, 0b110])
    assert gf2_rank(matrix) == 2
    assert gf2_nullspace(matrix) == [0b111]
    assert matrix.multiply(0b111) == [0, 0]


def test_nullspace_dimension():
    """Test de dim núcleo = n − rango sobre matrices aleatorias"""
    rng = np.random.default_rng(17)
    for _ in range(20):
        matrix = GF2Matrix(6, [int(r) for r in rng.integers(0, 64, size=4)])
        basis = gf2_nullspace(matrix)
        assert len(basis) == 6 - gf2_rank(matrix)
        for v in basis:
            assert matrix.multiply(v) == [0] * len(matrix)


def test_span_includes_zero():
    """Test del espacio generado"""
    assert sorted(span([1, 2])) == [0, 1, 2, 3]
    assert span([]) == [0]


def test_matrix_rejects_wide_row():
    """Test de fila fuera de n bits"""
    with pytest.raises(WidthError):
        GF2Matrix(3, [8])


# ============================================================================
# TESTS DE GROVER
# ============================================================================

def test_grover_iterations_closed_form():
    """Test de ⌊(π/4)·√(2^n/t)⌋"""
    assert grover_iterations(4, 1) == 3
    assert grover_iterations(10, 1) == 25
    assert grover_iterations(4, 16) == 0
    with pytest.raises(VacuousPredicateError):
        grover_iterations(4, 0)


def test_grover_success_probability():
    """Test de sin²((2k+1)θ)"""
    assert grover_success_probability(4, 1, 3) > 0.95
    assert grover_success_probability(4, 1, 0) == pytest.approx(1 / 16)
    assert grover_success_probability(4, 0, 3) == 0.0


def test_grover_finds_marked_element():
    """Test de Grover con un marcado sobre 2^6 elementos"""
    mask = np.zeros(64, dtype=bool)
    mask[37] = True
    hits = sum(grover_multi_target(6, mask, None, derive_rng(21, trial)) == 37 for trial in range(50))
    assert hits >= 45


def test_grover_multiple_targets():
    """Test de Grover con varios marcados: el resultado suele estar marcado"""
    predicate = lambda u: (u % 16) == 3
    hits = sum(predicate(grover_multi_target(8, predicate, None, derive_rng(22, trial))) for trial in range(40))
    assert hits >= 34


def test_grover_vacuous_predicate():
    """Test de predicado sin marcados"""
    with pytest.raises(VacuousPredicateError):
        grover_multi_target(4, np.zeros(16, dtype=bool), None, derive_rng(23, 0))


# ============================================================================
# TESTS DE SIMON (Q2)
# ============================================================================

def test_simon_samples_are_orthogonal_to_k1():
    """Test de que cada medición cumple u·k1 = 0"""
    permutation, key, rng = _instance(6, 30)
    attack = SimonKeyRecovery(6)
    play_attack(attack, permutation, em_permutation(permutation, key), rng, keyed=True)
    assert attack.samples
    assert all(parity(u, key.k1) == 0 for u in attack.samples)


def test_simon_recovers_key():
    """Test de recuperación de clave con Simon"""
    successes = 0
    for trial in range(10):
        permutation, key, rng = _instance(6, 31, trial)
        result = simon_q2_attack(6, permutation, key, rng)
        if result.success:
            successes += 1
            assert result.recovered_key == key
        assert result.classical_queries_used <= 3
    assert successes >= 8


def test_simon_width_limit():
    """Test del límite de n para Simon"""
    permutation, key, rng = _instance(4, 32)
    with pytest.raises(ConfigError):
        simon_q2_attack(64, permutation, key, rng)


# ============================================================================
# TESTS DEL ATAQUE DE GARRAS (Q1)
# ============================================================================

def test_canonical_points():
    """Test de representantes de {x, x ⊕ δ}"""
    assert canonical_points(3, 2).tolist() == [0, 1, 4, 5]
    assert canonical_points(3, 1).tolist() == [0, 2, 4, 6]


def test_claw_rejects_zero_delta():
    """Test de δ = 0"""
    with pytest.raises(DegenerateDeltaError):
        ClawKeyRecovery(6, delta=0, table_size=2)


def test_claw_exhaustive_recovers_key():
    """Test del modo exhaustivo: recorrer todos los u encuentra la clave"""
    successes = 0
    for trial in range(10):
        permutation, key, rng = _instance(6, 40, trial)
        result = q1_claw_attack(6, permutation, em_permutation(permutation, key), 1, 2, rng, exhaustive=True)
        if result.success:
            successes += 1
            assert result.recovered_key == key
        assert result.classical_queries_used <= 6
    assert successes >= 9


def test_claw_grover_respects_budget():
    """Test del ataque con Grover: consultas dentro del presupuesto declarado"""
    permutation, key, rng = _instance(8, 41)
    attack = ClawKeyRecovery(8, 1, table_size=4, retry_cap=2)
    result = q1_claw_attack(8, permutation, em_permutation(permutation, key), 1, 4, rng, retry_cap=2)
    assert result.classical_queries_used <= attack.q_e
    assert result.quantum_queries_used <= attack.q_p
    if result.success:
        assert result.recovered_key == key


def test_claw_without_resources_guesses_zero():
    """Test de recursos insuficientes: apuesta 0 sin consultas"""
    attack = ClawKeyRecovery.with_resources(8, q_e=2, q_p=100)
    assert attack.q_e == 0
    permutation, key, rng = _instance(8, 42)
    transcript = play_attack(attack, permutation, em_permutation(permutation, key), rng)
    assert transcript.guess == 0
    assert transcript.classical_queries == 0


def test_claw_prediction_grows_with_iterations():
    """Test de la predicción exacta: las iteraciones óptimas superan a ninguna"""
    permutation, key, rng = _instance(8, 43)
    cipher_table = em_table(permutation, key)
    table = [int(x) for x in rng.choice(canonical_points(8, 1), size=4, replace=False)]
    optimal = claw_success_prediction(permutation, cipher_table, 1, table)
    none = claw_success_prediction(permutation, cipher_table, 1, table, iterations=0)
    assert 0.0 < none < optimal <= 1.0


# ============================================================================
# TESTS DEL ATAQUE POR CUMPLEAÑOS
# ============================================================================

def test_birthday_with_full_probing():
    """Test de sondeo de todos los u: la clave aparece"""
    successes = 0
    for trial in range(10):
        permutation, key, rng = _instance(6, 50, trial)
        result = classical_birthday_attack(6, em_permutation(permutation, key), permutation, 1, 2, 64, rng)
        if result.success:
            successes += 1
            assert result.recovered_key == key
    assert successes >= 9


def test_birthday_with_resources():
    """Test de recursos: d = (q_E − 2)/2 y t = q_P/4"""
    attack = BirthdayKeyRecovery.with_resources(8, q_e=10, q_p=40)
    assert (attack.d_size, attack.t_size) == (4, 10)


# ============================================================================
# TESTS DE ATAQUES COMO DISTINGUIDORES
# ============================================================================

def test_attack_as_distinguisher():
    """Test de la envoltura de ataques"""
    assert isinstance(attack_as_distinguisher("q1-claw", 10, 40, 8), ClawKeyRecovery)
    assert isinstance(attack_as_distinguisher("birthday", 10, 40, 8), BirthdayKeyRecovery)
    assert isinstance(attack_as_distinguisher("simon-q2", 2, 2, 8), ZeroQueryGuesser)
    assert isinstance(attack_as_distinguisher("simon-q2", 20, 100, 8), SimonKeyRecovery)
    with pytest.raises(ConfigError):
        attack_as_distinguisher("no-such-attack", 1, 1, 8)


def test_loglog_slope():
    """Test de la pendiente log-log"""
    points = [(x, 3.0 * x**2) for x in (1.0, 2.0, 4.0, 8.0)]
    assert loglog_slope(points) == pytest.approx(2.0)
    with pytest.raises(ConfigError):
        loglog_slope([(1.0, 1.0), (2.0, 0.0)])

