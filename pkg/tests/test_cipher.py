"""
Tests de permutaciones, cifrado Even-Mansour y reprogramación
"""
import numpy as np
import pytest
from scipy import stats

from src.cipher import (
    FunctionTable,
    Key,
    KeyDistribution,
    Permutation,
    ReprogramSet,
    Transcript,
    compose,
    em_forward,
    em_inverse,
    em_permutation,
    em_table,
    fn_reprogram_point,
    fn_reprogram_set,
    fwd_only_encrypt,
    fwd_only_reprogram,
    fwd_only_table,
    identity_permutation,
    internal_collision,
    invert,
    key_from_hex,
    key_to_hex,
    make_swap,
    perm_reprogram,
    permutation_from_hex,
    permutation_to_hex,
    sample_function,
    sample_k1_given_k2,
    sample_k2_given_k1,
    sample_key,
    sample_permutation,
    swap_after,
)
from src.utils.errors import ReprogramSetError, TranscriptError, WidthError
from src.utils.rng import derive_rng


@pytest.fixture
def rng():
    return derive_rng(42, 0)


# ============================================================================
# TESTS DE PERMUTACIONES
# ============================================================================

def test_sample_permutation_is_bijection(rng):
    """Test de que la permutación muestreada es una biyección"""
    permutation = sample_permutation(6, rng)
    assert sorted(permutation.table.tolist()) == list(range(64))
    for x in range(64):
        assert permutation.inverse(permutation(x)) == x


def test_sample_permutation_is_uniform():
    """Test chi-cuadrado de la imagen de 0 sobre 2^3 valores"""
    counts = np.zeros(8, dtype=int)
    for trial in range(4000):
        counts[sample_permutation(3, derive_rng(9, trial))(0)] += 1
    assert stats.chisquare(counts).pvalue > 1e-3


def test_permutation_rejects_non_bijection():
    """Test de tabla con valores repetidos"""
    with pytest.raises(WidthError):
        Permutation(2, np.array([0, 0, 1, 2]))


def test_permutation_table_is_read_only(rng):
    """Test de inmutabilidad de la tabla"""
    permutation = sample_permutation(3, rng)
    with pytest.raises(ValueError):
        permutation.table[0] = 1


def test_zero_width_permutation():
    """Test de n = 0: una sola entrada"""
    assert identity_permutation(0).table.tolist() == [0]


def test_compose_and_invert(rng):
    """Test de P ∘ P⁻¹ = id"""
    permutation = sample_permutation(5, rng)
    assert compose(permutation, invert(permutation)) == identity_permutation(5)


def test_make_swap_and_swap_after(rng):
    """Test de swap_after frente a la composición explícita"""
    permutation = sample_permutation(4, rng)
    assert swap_after(permutation, 3, 9) == compose(permutation, make_swap(4, 3, 9))
    assert make_swap(4, 5, 5) == identity_permutation(4)
    with pytest.raises(WidthError):
        make_swap(4, 0, 16)


def test_sample_function_range(rng):
    """Test de función aleatoria de m a n bits"""
    function = sample_function(5, 3, rng)
    assert function.table.shape == (32,)
    assert function.table.max() < 8
    with pytest.raises(WidthError):
        FunctionTable(2, 2, np.array([0, 1, 2, 4]))


def test_permutation_hex_dump():
    """Test del volcado hexadecimal: una entrada por línea"""
    permutation = Permutation(2, np.array([3, 0, 2, 1]))
    text = permutation_to_hex(permutation)
    assert text == "3\n0\n2\n1\n"
    assert permutation_from_hex(text, 2) == permutation
    with pytest.raises(WidthError):
        permutation_from_hex("0\n1\n", 2)


# ============================================================================
# TESTS DEL CIFRADO
# ============================================================================

def test_em_forward_inverse(rng):
    """Test de D(E(x)) = x"""
    permutation = sample_permutation(6, rng)
    key = sample_key(KeyDistribution.TWO_KEY, 6, rng)
    for x in range(64):
        assert em_inverse(permutation, key, em_forward(permutation, key, x)) == x


def test_em_table_matches_pointwise(rng):
    """Test de la tabla completa frente a la evaluación puntual"""
    permutation = sample_permutation(5, rng)
    key = Key(5, 7, 19)
    table = em_table(permutation, key)
    assert table.tolist() == [em_forward(permutation, key, x) for x in range(32)]
    assert isinstance(em_permutation(permutation, key), Permutation)


def test_one_key_distribution(rng):
    """Test de k1 = k2 en la variante de una clave"""
    for _ in range(10):
        key = sample_key(KeyDistribution.ONE_KEY, 8, rng)
        assert key.k1 == key.k2


def test_conditional_key_distributions(rng):
    """Test de D_{|k1} y D_{|k2}: fijas en una clave, en rango en dos claves"""
    assert sample_k2_given_k1(KeyDistribution.ONE_KEY, 8, 77, rng) == 77
    assert sample_k1_given_k2(KeyDistribution.ONE_KEY, 8, 5, rng) == 5
    for _ in range(20):
        assert 0 <= sample_k2_given_k1(KeyDistribution.TWO_KEY, 4, 3, rng) < 16
        assert 0 <= sample_k1_given_k2(KeyDistribution.TWO_KEY, 4, 3, rng) < 16


def test_key_width_check():
    """Test de subclave fuera de rango"""
    with pytest.raises(WidthError):
        Key(3, 8, 0)


def test_key_mismatched_width(rng):
    """Test de clave y permutación de anchos distintos"""
    with pytest.raises(WidthError):
        em_forward(sample_permutation(3, rng), Key(4, 1, 1), 0)


def test_key_hex_dump():
    """Test del volcado de clave en dos líneas"""
    key = Key(8, 0xAB, 0x0C)
    assert key_to_hex(key) == "ab\nc\n"
    assert key_from_hex(key_to_hex(key), 8) == key


def test_fwd_only_encrypt(rng):
    """Test de E_k[F](x) = F(x ⊕ k)"""
    function = sample_function(4, 4, rng)
    assert fwd_only_encrypt(function, 5, 3) == function(6)
    assert fwd_only_table(function, 5).tolist() == [function(x ^ 5) for x in range(16)]


# ============================================================================
# TESTS DE TRANSCRIPCIONES
# ============================================================================

def test_transcript_rejects_repeated_input():
    """Test de entrada repetida"""
    transcript = Transcript([(1, 2)])
    with pytest.raises(TranscriptError):
        transcript.append(1, 3)


def test_transcript_rejects_repeated_output():
    """Test de salida repetida con la regla por defecto"""
    with pytest.raises(TranscriptError):
        Transcript([(1, 2), (3, 2)])


def test_transcript_allows_repeated_output_for_functions():
    """Test de salidas repetidas permitidas para funciones"""
    transcript = Transcript([(1, 2), (3, 2)], require_distinct_outputs=False)
    assert not transcript.has_distinct_outputs()
    assert transcript.outputs == [2, 2]


def test_transcript_prefix_and_extended():
    """Test de prefijos y extensión sin mutar el original"""
    transcript = Transcript([(1, 2), (3, 4)])
    extended = transcript.extended(5, 6)
    assert len(transcript) == 2
    assert extended.entries == ((1, 2), (3, 4), (5, 6))
    assert transcript.prefix(1) == Transcript([(1, 2)])


# ============================================================================
# TESTS DE REPROGRAMACIÓN
# ============================================================================

def test_perm_reprogram_empty_is_identity(rng):
    """Test de transcripción vacía: P sin cambios"""
    permutation = sample_permutation(4, rng)
    assert perm_reprogram(permutation, Transcript(), Key(4, 1, 2)) == permutation


def test_perm_reprogram_single_pair(rng):
    """Test de un solo par: E_k[P_{T,k}](x) = y"""
    permutation = sample_permutation(6, rng)
    key = Key(6, 11, 40)
    reprogrammed = perm_reprogram(permutation, Transcript([(17, 3)]), key)
    assert em_forward(reprogrammed, key, 17) == 3


def test_perm_reprogram_consistent_without_collisions():
    """Test de consistencia con la transcripción cuando no hay colisión interna"""
    checked = 0
    for trial in range(20):
        rng = derive_rng(7, trial)
        permutation = sample_permutation(6, rng)
        key = sample_key(KeyDistribution.TWO_KEY, 6, rng)
        xs = rng.choice(64, size=5, replace=False)
        ys = rng.choice(64, size=5, replace=False)
        transcript = Transcript(zip(xs.tolist(), ys.tolist()))
        reprogrammed = perm_reprogram(permutation, transcript, key)
        if internal_collision(permutation, transcript, key) is None:
            checked += 1
            for x, y in transcript:
                assert em_forward(reprogrammed, key, x) == y
    assert checked > 0


def test_perm_reprogram_with_collision_is_still_permutation():
    """Test de colisión interna: el resultado sigue siendo una permutación"""
    permutation = identity_permutation(3)
    key = Key(3, 0, 0)
    # P(x_0) = 1 = y_1: colisión interna
    transcript = Transcript([(1, 2), (0, 1)])
    assert internal_collision(permutation, transcript, key) == (0, 1)
    reprogrammed = perm_reprogram(permutation, transcript, key)
    assert sorted(reprogrammed.table.tolist()) == list(range(8))


def test_fn_reprogram_set_and_point(rng):
    """Test de F^{(B)} y F_{s↦y}"""
    function = sample_function(4, 4, rng)
    reprogrammed = fn_reprogram_set(function, ReprogramSet(((2, 9), (5, 1))))
    assert reprogrammed(2) == 9
    assert reprogrammed(5) == 1
    assert all(reprogrammed(x) == function(x) for x in range(16) if x not in (2, 5))
    assert fn_reprogram_point(function, 3, 0)(3) == 0
    assert fn_reprogram_set(function, ReprogramSet()) == function


def test_reprogram_set_rejects_repeated_input():
    """Test de entrada repetida en B"""
    with pytest.raises(ReprogramSetError):
        ReprogramSet(((1, 2), (1, 3)))


def test_fwd_only_reprogram(rng):
    """Test de F_{T,k}: E_k[F_{T,k}](x_i) = y_i con salidas repetidas"""
    function = sample_function(5, 5, rng)
    transcript = Transcript([(4, 7), (9, 7), (30, 1)], require_distinct_outputs=False)
    reprogrammed = fwd_only_reprogram(function, transcript, 13)
    for x, y in transcript:
        assert fwd_only_encrypt(reprogrammed, 13, x) == y
