"""
Tests de la estimación Monte-Carlo y las pruebas de equivalencia
"""
import math
from functools import partial

import numpy as np
import pytest

from src.cipher import KeyDistribution
from src.games import World
from src.games.engine import BadFlags, GameTranscript
from src.games.estimation import (
    GameId,
    GameSpec,
    compare_experiments,
    estimate_advantage,
    flag_frequencies,
    run_trials,
    smoothed_ci_halfwidth,
    smoothed_proportion_ci,
    stage_expectations,
    total_variation,
    tv_noise_floor,
    view_distance,
)
from src.games.strategies import FirstOutputLowBit, ResamplingProber, ZeroQueryGuesser
from src.cipher.reprogramming import Transcript
from src.utils.errors import ConfigError


def _transcript(stages, flags=None, guess=0):
    return GameTranscript(
        classical_entries=Transcript(),
        directions=[],
        per_stage_quantum_counts=list(stages),
        phase_quantum_counts=[sum(stages)],
        guess=guess,
        bad_flags=flags or BadFlags(),
    )


# ============================================================================
# TESTS DE ESTADÍSTICA
# ============================================================================

def test_total_variation_identical_and_disjoint():
    """Test de TV: 0 entre muestras iguales y 1 entre soportes disjuntos"""
    assert total_variation([1, 2, 2, 3], [3, 2, 1, 2]) == pytest.approx(0.0)
    assert total_variation([0, 0], [1, 1]) == pytest.approx(1.0)
    assert total_variation([0, 1], [0, 0]) == pytest.approx(0.5)


def test_total_variation_empty_sample():
    """Test de muestra vacía"""
    with pytest.raises(ConfigError):
        total_variation([], [1])


def test_tv_noise_floor():
    """Test del piso de ruido sqrt(K/(πN))"""
    assert tv_noise_floor(224, 100_000) == pytest.approx(math.sqrt(224 / (math.pi * 100_000)))
    assert tv_noise_floor(224, 100_000) > 0.02


def test_smoothed_ci_is_positive_at_extremes():
    """Test del suavizado: semiancho > 0 aunque todas las apuestas coincidan"""
    assert smoothed_ci_halfwidth(0, 0, 100) > 0.0
    assert smoothed_ci_halfwidth(100, 100, 100) > 0.0
    assert smoothed_proportion_ci(0, 100) > 0.0
    assert smoothed_ci_halfwidth(50, 50, 100) > smoothed_ci_halfwidth(50, 50, 10_000)


def test_flag_frequencies():
    """Test de frecuencias de eventos malos"""
    transcripts = [
        _transcript([0], BadFlags(bad1=True)),
        _transcript([0], BadFlags(bad3=True)),
        _transcript([0]),
        _transcript([0], BadFlags(bad1=True, bad2=True)),
    ]
    assert flag_frequencies(transcripts) == {"bad1": 0.5, "bad2": 0.25, "bad3": 0.25}
    assert flag_frequencies([]) == {"bad1": 0.0, "bad2": 0.0, "bad3": 0.0}


def test_stage_expectations_pads_short_transcripts():
    """Test de medias por etapa con transcripciones de longitudes distintas"""
    expectations = stage_expectations([_transcript([2, 0, 1]), _transcript([0, 4])])
    np.testing.assert_allclose(expectations, [1.0, 2.0, 0.5])


# ============================================================================
# TESTS DE ESTIMACIÓN DE VENTAJA
# ============================================================================

def test_estimate_requires_minimum_trials():
    """Test de menos de 100 ensayos"""
    spec = GameSpec(game=GameId.EM, n=4)
    with pytest.raises(ConfigError):
        estimate_advantage(ZeroQueryGuesser, spec, 50, seed=1)


def test_zero_query_guesser_has_no_advantage():
    """Test de ventaja nula sin consultas"""
    estimate = estimate_advantage(ZeroQueryGuesser, GameSpec(game=GameId.EM, n=4), 200, seed=1)
    assert estimate.advantage == 0.0
    assert estimate.p_world1 == estimate.p_world0 == 0.0
    assert estimate.ci_halfwidth > 0.0
    assert estimate.within_bound()


def test_first_output_low_bit_within_bound():
    """Test de un distinguidor clásico frente a la cota de dos sentidos"""
    estimate = estimate_advantage(FirstOutputLowBit, GameSpec(game=GameId.EM, n=6), 2000, seed=3)
    assert estimate.within_bound()
    assert estimate.advantage < 0.1


def test_perm_resampling_advantage_within_bound():
    """Test del remuestreo de permutaciones contra 4·sqrt(q/2^n)"""
    factory = partial(ResamplingProber, 4)
    estimate = estimate_advantage(factory, GameSpec(game=GameId.RESAMPLE_PERM, n=6), 2000, seed=5)
    assert estimate.bound == pytest.approx(1.0)
    assert estimate.p_world0 == 0.0
    assert estimate.within_bound()


def test_fn_resampling_advantage_within_bound():
    """Test del remuestreo de funciones contra 1.5·sqrt(q/2^m)"""
    factory = partial(ResamplingProber, 2)
    estimate = estimate_advantage(factory, GameSpec(game=GameId.RESAMPLE_FN, n=8), 2000, seed=6)
    assert estimate.bound == pytest.approx(1.5 * math.sqrt(2 / 256))
    assert estimate.within_bound()


def test_estimation_is_reproducible():
    """Test de reproducibilidad con la misma semilla"""
    spec = GameSpec(game=GameId.EM, n=5)
    first = estimate_advantage(FirstOutputLowBit, spec, 300, seed=11)
    second = estimate_advantage(FirstOutputLowBit, spec, 300, seed=11)
    assert first == second


@pytest.mark.slow
def test_results_do_not_depend_on_workers():
    """Test de independencia del número de procesos"""
    spec = GameSpec(game=GameId.EM, n=5, world=World.REAL)
    serial = run_trials(FirstOutputLowBit, spec, 200, seed=4, threads=1)
    parallel = run_trials(FirstOutputLowBit, spec, 200, seed=4, threads=2)
    assert [t.view() for t in serial] == [t.view() for t in parallel]


def test_paired_comparison_of_identical_games():
    """Test de comparación pareada de un juego consigo mismo: TV = 0"""
    spec = GameSpec(game=GameId.EM, n=4, variant=KeyDistribution.ONE_KEY)
    samples = compare_experiments(FirstOutputLowBit, spec, spec, 200, seed=8, paired=True)
    distance, floor = view_distance(samples)
    assert distance == 0.0
    assert floor > 0.0


def test_compare_requires_trials():
    """Test de cero ensayos"""
    spec = GameSpec(game=GameId.EM, n=4)
    with pytest.raises(ConfigError):
        compare_experiments(ZeroQueryGuesser, spec, spec, 0, seed=1)
