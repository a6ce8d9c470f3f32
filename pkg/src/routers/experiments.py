"""
Comandos de experimentos: ataques, lemas, híbridos y barridos de cotas
"""
import logging
import time
from dataclasses import dataclass
from functools import partial
from typing import Callable, List, Optional, Sequence, Tuple

from ..attacks import ATTACK_IDS, attack_as_distinguisher, attack_result, loglog_slope, play_attack
from ..attacks.birthday import BirthdayKeyRecovery
from ..attacks.claw import ClawKeyRecovery
from ..attacks.simon import SimonKeyRecovery
from ..cipher.even_mansour import KeyDistribution, em_permutation, sample_key
from ..cipher.permutation import sample_permutation
from ..config import settings
from ..games.actions import Distinguisher
from ..games.bounds import evaluate_bound
from ..games.estimation import (
    ComparisonSamples,
    GameId,
    GameSpec,
    compare_experiments,
    estimate_advantage,
    flag_frequencies,
    smoothed_ci_halfwidth,
    smoothed_proportion_ci,
    stage_expectations,
    summarize,
    view_distance,
)
from ..games.even_mansour import World
from ..games.strategies import (
    ClassicalProber,
    CollisionProber,
    FixedPointReprogrammer,
    GeometricReprogrammer,
    ResamplingProber,
    TwoQueryProbe,
)
from ..schemas.experiments import (
    AdvantageEstimate,
    AttackResult,
    CommandResult,
    ExperimentConfig,
    ResultRow,
    Variant,
)
from ..utils.errors import ConfigError
from ..utils.parallel import chunk_ranges, resolve_threads, run_parallel
from ..utils.rng import MAX_SEED, derive_rng
from ..utils.routing import CommandRouter

logger = logging.getLogger(__name__)

router = CommandRouter()

AdversaryFactory = Callable[[], Distinguisher]


# ============================================================================
# VALIDACIÓN Y FILAS
# ============================================================================

def validate_config(config: ExperimentConfig) -> None:
    """
    Comprobaciones comunes a todos los comandos.

    Raises:
        ConfigError: Parámetro fuera de rango
    """
    if config.n < 1:
        raise ConfigError(f"n debe ser positivo, no {config.n}")
    if config.n > settings.MAX_QUBITS:
        raise ConfigError(f"n={config.n} excede el límite del simulador ({settings.MAX_QUBITS} qubits)")
    if config.m is not None and not 1 <= config.m <= settings.MAX_QUBITS:
        raise ConfigError(f"m={config.m} fuera de [1, {settings.MAX_QUBITS}]")
    if config.trials < 1:
        raise ConfigError(f"Se requiere al menos un ensayo, no {config.trials}")
    if not 0 <= config.seed <= MAX_SEED:
        raise ConfigError(f"Semilla fuera de rango de 64 bits: {config.seed}")
    if config.threads < 0:
        raise ConfigError(f"Número de procesos negativo: {config.threads}")
    if config.j < 0:
        raise ConfigError(f"Índice de híbrido negativo: {config.j}")
    for label, values in (("q_e", config.q_e), ("q_p", config.q_p), ("q", config.q)):
        if any(value < 0 for value in values):
            raise ConfigError(f"{label} contiene valores negativos: {values}")


def require_width(n: int, cap: int, label: str) -> None:
    if n > cap:
        raise ConfigError(f"n={n} excede el límite de {label} ({cap})")


def key_distribution(variant: Variant) -> KeyDistribution:
    if Variant(variant) is Variant.FORWARD_ONLY:
        raise ConfigError("La variante de solo ida no tiene distribución de claves (k1, k2)")
    return KeyDistribution(Variant(variant).value)


def make_row(
    config: ExperimentConfig,
    name: str,
    started: float,
    *,
    p_world1: float,
    p_world0: float,
    advantage: float,
    ci_halfwidth: float,
    bound: float,
    vacuous: bool = False,
    q_e: int = 0,
    q_p: int = 0,
    j: int = 0,
    n: Optional[int] = None,
    variant: Optional[str] = None,
) -> ResultRow:
    return ResultRow(
        experiment=config.experiment.value,
        name=name,
        n=config.n if n is None else n,
        variant=Variant(config.variant).value if variant is None else variant,
        q_e=int(q_e),
        q_p=int(q_p),
        j=int(j),
        trials=config.trials,
        p_world1=float(p_world1),
        p_world0=float(p_world0),
        advantage=float(advantage),
        ci_halfwidth=float(ci_halfwidth),
        bound=float(bound),
        seed=config.seed,
        wall_time_ms=(time.perf_counter() - started) * 1000.0,
        vacuous=bool(vacuous),
    )


def estimate_row(
    config: ExperimentConfig,
    name: str,
    estimate: AdvantageEstimate,
    started: float,
    **fields,
) -> ResultRow:
    return make_row(
        config,
        name,
        started,
        p_world1=estimate.p_world1,
        p_world0=estimate.p_world0,
        advantage=estimate.advantage,
        ci_halfwidth=estimate.ci_halfwidth,
        bound=estimate.bound,
        vacuous=estimate.vacuous,
        **fields,
    )


def _guess_rate(samples: ComparisonSamples, side: int) -> float:
    return float(samples.guesses(side).mean())


def tv_row(config: ExperimentConfig, name: str, samples: ComparisonSamples, started: float, **fields) -> ResultRow:
    """advantage = TV entre vistas, ci = piso de ruido, bound = umbral de equivalencia"""
    tv, floor = view_distance(samples)
    threshold = evaluate_bound("equivalence")
    return make_row(
        config,
        name,
        started,
        p_world1=_guess_rate(samples, 1),
        p_world0=_guess_rate(samples, 0),
        advantage=tv,
        ci_halfwidth=floor,
        bound=threshold.clipped,
        vacuous=threshold.vacuous,
        **fields,
    )


def flag_rows(
    config: ExperimentConfig, transcripts, started: float, n: int, q_e: int, q_p: int, j: int
) -> List[ResultRow]:
    """Una fila por bandera: p_world1 = frecuencia, bound = su cota analítica"""
    frequencies = flag_frequencies(transcripts)
    trials = len(transcripts)
    caps = {
        "bad1": evaluate_bound("bad-collision", n=n, j=j),
        "bad2": evaluate_bound("bad-collision", n=n, j=j),
        "bad3": evaluate_bound("bad-late-query", n=n, q_e=q_e, q_p=q_p, j=j),
    }
    rows = []
    for flag, frequency in frequencies.items():
        ones = int(round(frequency * trials))
        rows.append(
            make_row(
                config,
                flag,
                started,
                p_world1=frequency,
                p_world0=0.0,
                advantage=frequency,
                ci_halfwidth=smoothed_proportion_ci(ones, trials),
                bound=caps[flag].clipped,
                vacuous=caps[flag].vacuous,
                q_e=q_e,
                q_p=q_p,
                j=j,
            )
        )
    return rows


# ============================================================================
# ATAQUES
# ============================================================================

@dataclass(frozen=True)
class AttackTask:
    attack_id: str
    n: int
    dist: KeyDistribution
    params: Tuple[int, ...]
    seed: int
    point: int
    side: int
    start: int
    stop: int


def build_attack(attack_id: str, n: int, params: Sequence[int]):
    if attack_id == "simon-q2":
        return SimonKeyRecovery(n, *params)
    if attack_id == "q1-claw":
        return ClawKeyRecovery(n, settings.CLAW_DELTA, *params)
    return BirthdayKeyRecovery(n, settings.CLAW_DELTA, *params)


def attack_trial(task: AttackTask, trial: int) -> AttackResult:
    """
    Lado 1: E = E_k[P] con k según la variante (tasa de éxito).
    Lado 0: E = R independiente de P (falsa aceptación).
    """
    instance_rng, attack_rng = derive_rng(task.seed, task.point, task.side, trial).spawn(2)
    permutation = sample_permutation(task.n, instance_rng)
    if task.side:
        cipher = em_permutation(permutation, sample_key(task.dist, task.n, instance_rng))
    else:
        cipher = sample_permutation(task.n, instance_rng)
    attack = build_attack(task.attack_id, task.n, task.params)
    transcript = play_attack(
        attack, permutation, cipher, attack_rng, keyed=task.attack_id == "simon-q2", name=task.attack_id
    )
    return attack_result(attack, transcript)


def _run_attack_task(task: AttackTask) -> List[AttackResult]:
    return [attack_trial(task, trial) for trial in range(task.start, task.stop)]


def run_attack_trials(
    attack_id: str,
    n: int,
    dist: KeyDistribution,
    params: Tuple[int, ...],
    trials: int,
    seed: int,
    side: int,
    point: int = 0,
    threads: Optional[int] = 1,
) -> List[AttackResult]:
    workers = resolve_threads(threads)
    tasks = [
        AttackTask(attack_id, n, dist, params, seed, point, side, start, stop)
        for start, stop in chunk_ranges(trials, workers * 4 if workers > 1 else 1)
    ]
    return [result for block in run_parallel(_run_attack_task, tasks, workers) for result in block]


def attack_parameters(name: str, config: ExperimentConfig) -> List[Tuple[int, ...]]:
    """
    Puntos de parámetros de cada ataque.

    - simon-q2: (3n iteraciones como máximo,)
    - q1-claw: (tamaño de tabla = q_E / 2,) por cada q_E; por defecto 2^{n/3}
    - birthday: (d = q_E / 2, t = q_P / 2) sobre la rejilla; por defecto 2^{n/2}
    """
    n = config.n
    if name == "simon-q2":
        return [(3 * n,)]
    if name == "q1-claw":
        sizes = [q // 2 for q in config.q_e] or [max(1, round(2 ** (n / 3)))]
        return [(size,) for size in sizes]
    default = 1 << (n // 2)
    tables = [q // 2 for q in config.q_e] or [default]
    probes = [q // 2 for q in config.q_p] or [default]
    return [(d, t) for d in tables for t in probes]


@router.command("attack")
def cmd_attack(config: ExperimentConfig) -> CommandResult:
    """Ataques de recuperación de clave: tasa de éxito y falsa aceptación"""
    validate_config(config)
    name = config.name or "simon-q2"
    if name not in ATTACK_IDS:
        raise ConfigError(f"Ataque desconocido: '{name}' (opciones: {', '.join(ATTACK_IDS)})")
    dist = key_distribution(config.variant)
    caps = {
        "simon-q2": settings.SIMON_MAX_N,
        "q1-claw": settings.CLAW_MAX_N,
        "birthday": settings.MAX_PERMUTATION_BITS,
    }
    require_width(config.n, caps[name], name)

    rows = []
    for point, params in enumerate(attack_parameters(name, config)):
        started = time.perf_counter()
        run = partial(
            run_attack_trials, name, config.n, dist, params, config.trials, config.seed,
            point=point, threads=config.threads,
        )
        real, ideal = run(side=1), run(side=0)
        successes = sum(result.success for result in real)
        false_accepts = sum(result.success for result in ideal)
        q_e = max(result.classical_queries_used for result in real)
        q_p = max(result.quantum_queries_used for result in real)
        if name == "simon-q2":
            bound = evaluate_bound("trivial")
        else:
            bound = evaluate_bound("em-two-way", n=config.n, q_e=q_e, q_p=q_p)
        p1, p0 = successes / config.trials, false_accepts / config.trials
        rows.append(
            make_row(
                config,
                name,
                started,
                p_world1=p1,
                p_world0=p0,
                advantage=abs(p1 - p0),
                ci_halfwidth=smoothed_ci_halfwidth(successes, false_accepts, config.trials),
                bound=bound.clipped,
                vacuous=bound.vacuous,
                q_e=q_e,
                q_p=q_p,
            )
        )
        logger.info("🔑 %s n=%d %s: éxito %.3f, falsa aceptación %.3f", name, config.n, params, p1, p0)
    return CommandResult(rows=rows)


# ============================================================================
# LEMAS DE REMUESTREO Y REPROGRAMACIÓN
# ============================================================================

LEMMA_NAMES = ("resample-perm", "resample-fn", "reprogram")


@router.command("lemma")
def cmd_lemma(config: ExperimentConfig) -> CommandResult:
    """Juegos de remuestreo de permutaciones y funciones, y de reprogramación arbitraria"""
    validate_config(config)
    name = config.name or "resample-perm"
    n, m = config.n, config.input_bits
    estimate = partial(estimate_advantage, trials=config.trials, seed=config.seed, threads=config.threads)
    rows = []

    if name in ("resample-perm", "resample-fn"):
        if name == "resample-perm":
            require_width(n, settings.MAX_PERMUTATION_BITS, name)
            spec = GameSpec(GameId.RESAMPLE_PERM, n)
        else:
            require_width(max(n, m), settings.MAX_PERMUTATION_BITS, name)
            spec = GameSpec(GameId.RESAMPLE_FN, n, m=m)
        for point, q in enumerate(config.q or config.q_p or [1]):
            started = time.perf_counter()
            result = estimate(partial(ResamplingProber, q), spec, point=point)
            rows.append(estimate_row(config, name, result, started, q_p=q))
        return CommandResult(rows=rows)

    if name == "reprogram":
        require_width(1 + m + n, settings.MAX_QUBITS, "reprogram (c, x, y)")
        q_max = (config.q or config.q_p or [16])[0]
        strategies = (
            ("reprogram:fixed-point", partial(FixedPointReprogrammer, m, n)),
            ("reprogram:geometric", partial(GeometricReprogrammer, m, n, q_max)),
        )
        spec = GameSpec(GameId.REPROGRAM, n, m=m)
        for point, (label, factory) in enumerate(strategies):
            started = time.perf_counter()
            result = estimate(factory, spec, point=point)
            rows.append(estimate_row(config, label, result, started, q_p=factory().q_p))
        return CommandResult(rows=rows)

    raise ConfigError(f"Lema desconocido: '{name}' (opciones: {', '.join(LEMMA_NAMES)})")


# ============================================================================
# CADENA DE HÍBRIDOS
# ============================================================================

def _check_index(j: int, q_e: int, primed: bool) -> None:
    upper = q_e - 1 if primed else q_e
    if j > upper:
        kind = "H'_j" if primed else "H_j"
        raise ConfigError(f"j={j} fuera de rango para {kind} con q_E={q_e}")


def _two_way_hybrid_rows(config: ExperimentConfig) -> List[ResultRow]:
    n, j = config.n, config.j
    dist = key_distribution(config.variant)
    factory = TwoQueryProbe
    probe = factory()
    q_e, q_p = probe.q_e, probe.q_p
    _check_index(j, q_e, config.primed)
    compare = partial(compare_experiments, factory, trials=config.trials, seed=config.seed, threads=config.threads)
    hybrid = GameSpec(GameId.HYBRID, n, variant=dist, j=j)
    expt = GameSpec(GameId.EXPT, n, variant=dist, j=j)
    em = GameSpec(GameId.EM, n, variant=dist)
    fields = {"q_e": q_e, "q_p": q_p, "j": j}
    rows = []

    if config.primed:
        started = time.perf_counter()
        samples = compare(expt.with_(primed=True), hybrid.with_(primed=True), point=2)
        rows.append(tv_row(config, f"tv:Expt'_{j}~H'_{j}", samples, started, **fields))
        rows.extend(flag_rows(config, samples.transcripts_1, started, n, q_e, q_p, j))

        started = time.perf_counter()
        samples = compare(hybrid.with_(primed=True), hybrid.with_(j=j + 1), point=5)
        stages = stage_expectations(samples.transcripts_1)
        q_stage = float(stages[j + 1]) if stages.size > j + 1 else 0.0
        result = summarize(samples, "hybrid-blinding-step", n=n, j=j, q_stage=q_stage)
        rows.append(estimate_row(config, f"gap:H'_{j}~H_{j + 1}", result, started, **fields))
        return rows

    if j == 0:
        started = time.perf_counter()
        samples = compare(hybrid, em.with_(world=World.REAL), point=0)
        rows.append(tv_row(config, "tv:H_0~real", samples, started, **fields))
    if j == q_e:
        started = time.perf_counter()
        samples = compare(hybrid, em.with_(world=World.IDEAL), point=1)
        rows.append(tv_row(config, f"tv:H_{q_e}~ideal", samples, started, **fields))
    if j < q_e:
        started = time.perf_counter()
        paired = compare(expt, expt.with_(primed=True), paired=True, point=3)
        rows.extend(flag_rows(config, paired.transcripts_1, started, n, q_e, q_p, j))
        rows.append(_identity_row(config, paired, started, **fields))

        started = time.perf_counter()
        samples = compare(hybrid, hybrid.with_(primed=True), point=4)
        result = summarize(samples, "hybrid-resampling-step", n=n, q_e=q_e, q_p=q_p)
        rows.append(estimate_row(config, f"gap:H_{j}~H'_{j}", result, started, **fields))
    return rows


def _identity_row(config: ExperimentConfig, paired: ComparisonSamples, started: float, **fields) -> ResultRow:
    """
    Expt_j y Expt'_j con los mismos flujos: sin banderas las vistas deben
    coincidir. advantage = fracción de pares limpios con vistas distintas.
    """
    clean = [
        (a, b)
        for a, b in zip(paired.transcripts_1, paired.transcripts_0)
        if not a.bad_flags.any() and not b.bad_flags.any()
    ]
    mismatches = sum(a.view() != b.view() for a, b in clean)
    rate = mismatches / len(clean) if clean else 0.0
    threshold = evaluate_bound("equivalence")
    j = fields.get("j", 0)
    return make_row(
        config,
        f"identical:Expt_{j}~Expt'_{j}",
        started,
        p_world1=rate,
        p_world0=0.0,
        advantage=rate,
        ci_halfwidth=smoothed_proportion_ci(mismatches, len(clean)),
        bound=threshold.clipped,
        vacuous=threshold.vacuous,
        **fields,
    )


def _forward_hybrid_rows(config: ExperimentConfig) -> List[ResultRow]:
    n, j = config.n, config.j
    factory = partial(ClassicalProber, 2, 2, 1)
    probe = factory()
    q_e, q_p = probe.q_e, probe.q_p
    _check_index(j, q_e, config.primed)
    compare = partial(compare_experiments, factory, trials=config.trials, seed=config.seed, threads=config.threads)
    hybrid = GameSpec(GameId.FORWARD_HYBRID, n, j=j)
    fwd = GameSpec(GameId.FORWARD_ONLY, n)
    fields = {"q_e": q_e, "q_p": q_p, "j": j}
    rows = []

    if config.primed:
        started = time.perf_counter()
        samples = compare(hybrid.with_(primed=True), hybrid.with_(j=j + 1), point=5)
        stages = stage_expectations(samples.transcripts_1)
        q_stage = float(stages[j + 1]) if stages.size > j + 1 else 0.0
        result = summarize(samples, "fwd-blinding-step", n=n, j=j, q_stage=q_stage)
        rows.append(estimate_row(config, f"gap:H'_{j}~H_{j + 1}", result, started, **fields))
        return rows

    if j == 0:
        started = time.perf_counter()
        samples = compare(hybrid, fwd.with_(world=World.REAL), point=0)
        rows.append(tv_row(config, "tv:H_0~real", samples, started, **fields))
    if j == q_e:
        started = time.perf_counter()
        samples = compare(hybrid, fwd.with_(world=World.IDEAL), point=1)
        rows.append(tv_row(config, f"tv:H_{q_e}~ideal", samples, started, **fields))
    if j < q_e:
        started = time.perf_counter()
        samples = compare(hybrid, hybrid.with_(primed=True), point=4)
        result = summarize(samples, "fwd-resampling-step", n=n, q_p=q_p)
        rows.append(estimate_row(config, f"gap:H_{j}~H'_{j}", result, started, **fields))
    return rows


@router.command("hybrid")
def cmd_hybrid(config: ExperimentConfig) -> CommandResult:
    """Equivalencias de la cadena de híbridos, banderas malas y saltos entre híbridos adyacentes"""
    validate_config(config)
    require_width(config.n, settings.MAX_PERMUTATION_BITS, "hybrid")
    if Variant(config.variant) is Variant.FORWARD_ONLY:
        return CommandResult(rows=_forward_hybrid_rows(config))
    return CommandResult(rows=_two_way_hybrid_rows(config))


# ============================================================================
# BARRIDOS
# ============================================================================

def sweep_distinguishers(
    n: int, variant: Variant, q_e: int, q_p: int
) -> List[Tuple[str, AdversaryFactory, GameSpec]]:
    """Distinguidores incluidos con el juego en que se miden"""
    if Variant(variant) is Variant.FORWARD_ONLY:
        spec = GameSpec(GameId.FORWARD_ONLY, n)
    else:
        spec = GameSpec(GameId.EM, n, variant=key_distribution(variant))
    entries = [
        ("classical-prober", partial(ClassicalProber, q_e, q_p), spec),
        ("collision-prober", partial(CollisionProber, q_e, q_p), spec),
        ("q1-claw", partial(attack_as_distinguisher, "q1-claw", q_e, q_p, n), spec),
        ("birthday", partial(attack_as_distinguisher, "birthday", q_e, q_p, n), spec),
    ]
    if spec.game is GameId.EM and n <= settings.SIMON_MAX_N:
        keyed = spec.with_(quantum_keyed=True)
        entries.append(("simon-q2", partial(attack_as_distinguisher, "simon-q2", q_e, q_p, n), keyed))
    return entries


def bound_sweep_rows(config: ExperimentConfig, grid: Sequence[Tuple[int, int]]) -> List[ResultRow]:
    rows = []
    point = 0
    for q_e, q_p in grid:
        for label, factory, spec in sweep_distinguishers(config.n, config.variant, q_e, q_p):
            started = time.perf_counter()
            adversary = factory()
            result = estimate_advantage(
                factory, spec, config.trials, config.seed, threads=config.threads, point=point
            )
            rows.append(estimate_row(config, label, result, started, q_e=adversary.q_e, q_p=adversary.q_p))
            point += 1
    return rows


def claw_scaling_rows(config: ExperimentConfig, grid: Sequence[Tuple[int, int]]) -> List[ResultRow]:
    """Ventaja del ataque Q1 sobre la rejilla; bound = referencia q_P²·q_E/2^n"""
    n = config.n
    spec = GameSpec(GameId.EM, n, variant=key_distribution(config.variant))
    rows = []
    for point, (q_e, q_p) in enumerate(grid):
        started = time.perf_counter()
        factory = partial(attack_as_distinguisher, "q1-claw", q_e, q_p, n)
        adversary = factory()
        samples = compare_experiments(
            factory, spec.with_(world=World.REAL), spec.with_(world=World.IDEAL),
            config.trials, config.seed, threads=config.threads, point=point,
        )
        result = summarize(samples, "claw-scaling", n=n, q_e=adversary.q_e, q_p=adversary.q_p)
        rows.append(estimate_row(config, "claw-scaling", result, started, q_e=adversary.q_e, q_p=adversary.q_p))
    return rows


def claw_scaling_slope(rows: Sequence[ResultRow]) -> float:
    """Pendiente log-log de la ventaja frente a q_P²·q_E/2^n"""
    return loglog_slope((row.q_p**2 * row.q_e / 2.0**row.n, row.advantage) for row in rows)


SWEEP_NAMES = ("bound", "claw-scaling")


@router.command("sweep")
def cmd_sweep(config: ExperimentConfig) -> CommandResult:
    """Rejilla (q_E, q_P): distinguidores contra la cota o escalado del ataque Q1"""
    validate_config(config)
    name = config.name or "bound"
    if name not in SWEEP_NAMES:
        raise ConfigError(f"Barrido desconocido: '{name}' (opciones: {', '.join(SWEEP_NAMES)})")
    grid = [(q_e, q_p) for q_e in config.q_e for q_p in config.q_p]
    if not grid:
        raise ConfigError("Rejilla vacía: indique --q-e y --q-p")
    require_width(config.n, settings.CLAW_MAX_N, "sweep")

    if name == "bound":
        return CommandResult(rows=bound_sweep_rows(config, grid))

    rows = claw_scaling_rows(config, grid)
    if len(rows) >= 2 and sum(1 for row in rows if row.advantage > 0) >= 2:
        logger.info("📈 Pendiente log-log del ataque Q1: %.3f", claw_scaling_slope(rows))
    return CommandResult(rows=rows)
