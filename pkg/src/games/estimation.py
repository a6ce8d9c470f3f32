"""
Estimación Monte-Carlo de ventajas y pruebas de equivalencia

Cada ensayo corre con su propio flujo `derive_rng(seed, point, side, trial)`;
el lado 1 y el lado 0 usan rutas distintas salvo en comparaciones pareadas,
donde ambos lados comparten la ruta del ensayo. Los ensayos se reparten en
bloques entre procesos y se reagrupan por índice, así que el resultado no
depende del número de trabajadores.
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..cipher.even_mansour import KeyDistribution
from ..config import settings
from ..schemas.experiments import AdvantageEstimate
from ..utils.errors import ConfigError
from ..utils.parallel import chunk_ranges, resolve_threads, run_parallel
from ..utils.rng import derive_rng
from .actions import Distinguisher
from .bounds import evaluate_bound
from .engine import GameTranscript
from .even_mansour import (
    World,
    run_em_game,
    run_expt,
    run_forward_hybrid,
    run_forward_only_game,
    run_hybrid,
)
from .lemmas import (
    reprogramming_epsilon,
    run_arbitrary_reprogramming_game,
    run_fn_resampling_game,
    run_perm_resampling_game,
)

logger = logging.getLogger(__name__)

AdversaryFactory = Callable[[], Distinguisher]

MIN_TRIALS = 100


class GameId(str, Enum):
    EM = "em"
    HYBRID = "hybrid"
    EXPT = "expt"
    FORWARD_ONLY = "forward-only"
    FORWARD_HYBRID = "forward-hybrid"
    RESAMPLE_PERM = "resample-perm"
    RESAMPLE_FN = "resample-fn"
    REPROGRAM = "reprogram"


@dataclass(frozen=True)
class GameSpec:
    """Identificador de juego más sus parámetros"""

    game: GameId
    n: int
    m: Optional[int] = None
    variant: KeyDistribution = KeyDistribution.TWO_KEY
    j: int = 0
    primed: bool = False
    world: World = World.REAL
    b: int = 1
    quantum_keyed: bool = False

    def with_(self, **changes) -> "GameSpec":
        return replace(self, **changes)

    @property
    def input_bits(self) -> int:
        return self.n if self.m is None else self.m


def run_game(adv: Distinguisher, spec: GameSpec, rng: np.random.Generator) -> GameTranscript:
    """Juega una partida del juego descrito por `spec`"""
    game = GameId(spec.game)
    if game is GameId.EM:
        return run_em_game(adv, spec.n, spec.variant, spec.world, rng, quantum_keyed=spec.quantum_keyed)
    if game is GameId.HYBRID:
        return run_hybrid(adv, spec.n, spec.variant, spec.j, spec.primed, rng)
    if game is GameId.EXPT:
        return run_expt(adv, spec.n, spec.variant, spec.j, spec.primed, rng)
    if game is GameId.FORWARD_ONLY:
        return run_forward_only_game(adv, spec.n, spec.world, rng)
    if game is GameId.FORWARD_HYBRID:
        return run_forward_hybrid(adv, spec.n, spec.j, spec.primed, rng)
    if game is GameId.RESAMPLE_PERM:
        return run_perm_resampling_game(adv, spec.n, spec.b, rng)
    if game is GameId.RESAMPLE_FN:
        return run_fn_resampling_game(adv, spec.input_bits, spec.n, spec.b, rng)
    return run_arbitrary_reprogramming_game(adv, spec.b, rng)


def default_pair(spec: GameSpec) -> Tuple[GameSpec, GameSpec]:
    """Mundos 1 y 0 que compara `estimate_advantage` para cada juego"""
    game = GameId(spec.game)
    if game in (GameId.EM, GameId.FORWARD_ONLY):
        return spec.with_(world=World.REAL), spec.with_(world=World.IDEAL)
    if game in (GameId.HYBRID, GameId.FORWARD_HYBRID, GameId.EXPT):
        return spec.with_(primed=False), spec.with_(primed=True)
    return spec.with_(b=1), spec.with_(b=0)


# ============================================================================
# EJECUCIÓN EN BLOQUES
# ============================================================================

@dataclass(frozen=True)
class _Chunk:
    factory: AdversaryFactory
    spec: GameSpec
    seed: int
    point: int
    side: int
    start: int
    stop: int


def _run_chunk(chunk: _Chunk) -> List[GameTranscript]:
    return [
        run_game(chunk.factory(), chunk.spec, derive_rng(chunk.seed, chunk.point, chunk.side, trial))
        for trial in range(chunk.start, chunk.stop)
    ]


def run_trials(
    factory: AdversaryFactory,
    spec: GameSpec,
    trials: int,
    seed: int,
    side: int = 0,
    point: int = 0,
    threads: Optional[int] = 1,
) -> List[GameTranscript]:
    """`trials` partidas independientes, en orden de índice de ensayo"""
    workers = resolve_threads(threads)
    tasks = [
        _Chunk(factory, spec, seed, point, side, start, stop)
        for start, stop in chunk_ranges(trials, workers * 4 if workers > 1 else 1)
    ]
    results = run_parallel(_run_chunk, tasks, workers)
    return [transcript for block in results for transcript in block]


@dataclass
class ComparisonSamples:
    transcripts_1: List[GameTranscript]
    transcripts_0: List[GameTranscript]

    @property
    def trials(self) -> int:
        return len(self.transcripts_1)

    def guesses(self, side: int) -> np.ndarray:
        transcripts = self.transcripts_1 if side else self.transcripts_0
        return np.fromiter((t.guess for t in transcripts), dtype=np.int64, count=len(transcripts))


def compare_experiments(
    factory: AdversaryFactory,
    spec_1: GameSpec,
    spec_0: GameSpec,
    trials: int,
    seed: int,
    threads: Optional[int] = 1,
    paired: bool = False,
    point: int = 0,
) -> ComparisonSamples:
    """
    Corre dos experimentos con el mismo distinguidor.

    Con `paired` ambos lados usan los mismos flujos por ensayo, de modo que
    dos juegos idénticos salvo eventos malos dan la misma partida cuando
    ninguno ocurre.
    """
    if trials < 1:
        raise ConfigError(f"Se requiere al menos un ensayo, no {trials}")
    side_0 = 1 if paired else 0
    return ComparisonSamples(
        transcripts_1=run_trials(factory, spec_1, trials, seed, side=1, point=point, threads=threads),
        transcripts_0=run_trials(factory, spec_0, trials, seed, side=side_0, point=point, threads=threads),
    )


# ============================================================================
# ESTADÍSTICA
# ============================================================================

def smoothed_ci_halfwidth(ones_1: int, ones_0: int, trials: int, z: Optional[float] = None) -> float:
    """Semiancho normal de p1 − p0 con frecuencias suavizadas (x+1)/(N+2); siempre > 0"""
    z = settings.CI_Z if z is None else z
    p1 = (ones_1 + 1) / (trials + 2)
    p0 = (ones_0 + 1) / (trials + 2)
    return z * math.sqrt(p1 * (1 - p1) / trials + p0 * (1 - p0) / trials)


def smoothed_proportion_ci(ones: int, trials: int, z: Optional[float] = None) -> float:
    """Semiancho normal de una sola frecuencia, con el mismo suavizado"""
    z = settings.CI_Z if z is None else z
    p = (ones + 1) / (trials + 2)
    return z * math.sqrt(p * (1 - p) / max(trials, 1))


def summarize(samples: ComparisonSamples, formula: str, **params: float) -> AdvantageEstimate:
    trials = samples.trials
    ones_1 = int(samples.guesses(1).sum())
    ones_0 = int(samples.guesses(0).sum())
    p1, p0 = ones_1 / trials, ones_0 / trials
    bound = evaluate_bound(formula, **params)
    return AdvantageEstimate(
        p_world1=p1,
        p_world0=p0,
        advantage=abs(p1 - p0),
        ci_halfwidth=smoothed_ci_halfwidth(ones_1, ones_0, trials),
        trials=trials,
        bound=bound.clipped,
        raw_bound=bound.raw,
        vacuous=bound.vacuous,
    )


def total_variation(samples_a: Iterable, samples_b: Iterable) -> float:
    """Distancia de variación total entre dos distribuciones empíricas"""
    counts_a, counts_b = Counter(samples_a), Counter(samples_b)
    total_a, total_b = sum(counts_a.values()), sum(counts_b.values())
    if not total_a or not total_b:
        raise ConfigError("Muestras vacías en la distancia de variación total")
    cells = set(counts_a) | set(counts_b)
    return 0.5 * sum(abs(counts_a[c] / total_a - counts_b[c] / total_b) for c in cells)


def tv_noise_floor(cells: int, trials: int) -> float:
    """Cota superior del sesgo de la TV empírica entre dos muestras de la misma distribución"""
    return math.sqrt(cells / (math.pi * trials))


def view_distance(samples: ComparisonSamples) -> Tuple[float, float]:
    """(TV entre las vistas de ambos lados, piso de ruido)"""
    views_1 = [t.view() for t in samples.transcripts_1]
    views_0 = [t.view() for t in samples.transcripts_0]
    cells = len(set(views_1) | set(views_0))
    return total_variation(views_1, views_0), tv_noise_floor(cells, samples.trials)


def flag_frequencies(transcripts: Sequence[GameTranscript]) -> Dict[str, float]:
    total = len(transcripts)
    if not total:
        return {"bad1": 0.0, "bad2": 0.0, "bad3": 0.0}
    return {
        "bad1": sum(t.bad_flags.bad1 for t in transcripts) / total,
        "bad2": sum(t.bad_flags.bad2 for t in transcripts) / total,
        "bad3": sum(t.bad_flags.bad3 for t in transcripts) / total,
    }


def stage_expectations(transcripts: Sequence[GameTranscript]) -> np.ndarray:
    """q_{P,j} medido: media de consultas cuánticas por etapa"""
    if not transcripts:
        return np.zeros(0)
    stages = max(len(t.per_stage_quantum_counts) for t in transcripts)
    counts = np.zeros((len(transcripts), stages))
    for row, transcript in enumerate(transcripts):
        counts[row, : len(transcript.per_stage_quantum_counts)] = transcript.per_stage_quantum_counts
    return counts.mean(axis=0)


def phase_expectation(transcripts: Sequence[GameTranscript], phase: int = 0) -> float:
    if not transcripts:
        return 0.0
    return float(np.mean([t.phase_quantum_counts[phase] for t in transcripts]))


# ============================================================================
# VENTAJA CONTRA LA COTA
# ============================================================================

def game_bound(
    spec: GameSpec, adversary: Distinguisher, samples: ComparisonSamples, epsilon: Optional[float] = None
) -> Tuple[str, Dict[str, float]]:
    """Fórmula y parámetros de la cota que corresponde al par de mundos por defecto"""
    game = GameId(spec.game)
    n, q_e, q_p = spec.n, adversary.q_e, adversary.q_p
    if game is GameId.EM:
        if spec.quantum_keyed:
            return "trivial", {}
        return "em-two-way", {"n": n, "q_e": q_e, "q_p": q_p}
    if game is GameId.FORWARD_ONLY:
        return "em-forward-only", {"n": n, "q_e": q_e, "q_p": q_p}
    if game is GameId.HYBRID:
        return "hybrid-resampling-step", {"n": n, "q_e": q_e, "q_p": q_p}
    if game is GameId.FORWARD_HYBRID:
        return "fwd-resampling-step", {"n": n, "q_p": q_p}
    if game is GameId.EXPT:
        return "bad-union", {"n": n, "q_e": q_e, "q_p": q_p}
    if game is GameId.RESAMPLE_PERM:
        return "perm-resampling", {"n": n, "q": q_p}
    if game is GameId.RESAMPLE_FN:
        return "fn-resampling", {"m": spec.input_bits, "q": q_p}
    measured_q = phase_expectation(samples.transcripts_0, 0)
    return "arbitrary-reprogramming", {"q": measured_q, "epsilon": epsilon or 0.0}


def estimate_advantage(
    adv_factory: AdversaryFactory,
    spec: GameSpec,
    trials: int,
    seed: int,
    threads: Optional[int] = 1,
    point: int = 0,
) -> AdvantageEstimate:
    """
    Ventaja del distinguidor entre los mundos por defecto del juego, con la
    cota que corresponde.

    En el juego de reprogramación arbitraria q es el número esperado de
    consultas medido con b = 0 y ε se calcula a partir de la descripción de B.

    Raises:
        ConfigError: Menos de 100 ensayos
    """
    if trials < MIN_TRIALS:
        raise ConfigError(f"Se requieren al menos {MIN_TRIALS} ensayos por mundo, no {trials}")
    spec_1, spec_0 = default_pair(spec)
    samples = compare_experiments(adv_factory, spec_1, spec_0, trials, seed, threads=threads, point=point)
    epsilon = None
    if GameId(spec.game) is GameId.REPROGRAM:
        epsilon = reprogramming_epsilon(adv_factory().setup(derive_rng(seed, point, 2, 0)))
    formula, params = game_bound(spec, adv_factory(), samples, epsilon)
    estimate = summarize(samples, formula, **params)
    logger.debug("Ventaja %s en %s: %.4f ± %.4f (cota %.4f)", adv_factory, spec.game, estimate.advantage,
                 estimate.ci_halfwidth, estimate.bound)
    return estimate
