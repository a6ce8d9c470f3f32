"""
Autoprueba: batería de criterios de aceptación de extremo a extremo

Cada criterio se registra con `@criterion(nombre)` y devuelve un
`CriterionResult`. `selftest` sale con 0 si todos pasan y con 1 si alguno
falla; `--quick` reduce los ensayos.
"""
import logging
import math
import time
from dataclasses import dataclass
from functools import partial
from typing import Callable, Dict, List

import numpy as np

from ..attacks.claw import ClawKeyRecovery, claw_success_prediction, q1_claw_attack
from ..attacks.oracles import play_attack
from ..cipher.even_mansour import KeyDistribution, em_forward, em_permutation, sample_key
from ..cipher.permutation import (
    compose,
    identity_permutation,
    make_swap,
    sample_permutation,
    swap_after,
)
from ..cipher.reprogramming import Transcript, internal_collision, perm_reprogram
from ..config import settings
from ..games.estimation import GameId, GameSpec, run_trials, smoothed_proportion_ci
from ..games.bounds import evaluate_bound
from ..games.strategies import ClassicalProber
from ..quantum.dense import gentle_measurement_sweep
from ..quantum.statevector import (
    RegisterLayout,
    apply_hadamard,
    apply_phase_oracle,
    apply_xor_oracle,
    init_basis_state,
    states_close,
)
from ..schemas.experiments import CommandResult, ExperimentConfig, ExperimentKind, Variant
from ..utils.rng import derive_rng
from ..utils.routing import CommandRouter
from .experiments import (
    claw_scaling_slope,
    cmd_attack,
    cmd_hybrid,
    cmd_lemma,
    cmd_sweep,
)

logger = logging.getLogger(__name__)

router = CommandRouter()


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


@dataclass(frozen=True)
class SuiteOptions:
    quick: bool
    seed: int
    threads: int

    def trials(self, full: int, quick: int) -> int:
        return quick if self.quick else full


Criterion = Callable[[SuiteOptions], CriterionResult]

CRITERIA: Dict[str, Criterion] = {}


def criterion(name: str):
    def register(fn: Criterion) -> Criterion:
        CRITERIA[name] = fn
        return fn

    return register


def _config(options: SuiteOptions, experiment: ExperimentKind, **fields) -> ExperimentConfig:
    return ExperimentConfig(experiment=experiment, seed=options.seed, threads=options.threads, **fields)


def _within(row, slack: float = 2.0) -> bool:
    return row.advantage <= row.bound + slack * row.ci_halfwidth


# ============================================================================
# ATAQUES
# ============================================================================

@criterion("simon-q2")
def simon_criterion(options: SuiteOptions) -> CriterionResult:
    n = 8
    trials = options.trials(100, 20)
    config = _config(options, ExperimentKind.ATTACK, name="simon-q2", n=n, trials=trials)
    row = cmd_attack(config).rows[0]
    passed = row.p_world1 >= 0.90 and row.q_p <= 6 * n
    return CriterionResult("simon-q2", passed, f"éxito {row.p_world1:.2f}, máx. {row.q_p} consultas cuánticas")


@criterion("q1-claw")
def claw_criterion(options: SuiteOptions) -> CriterionResult:
    n, table_size = 12, 16
    rng = derive_rng(options.seed, 90, 0, 0)
    permutation = sample_permutation(n, rng)
    key = sample_key(KeyDistribution.TWO_KEY, n, rng)
    cipher = em_permutation(permutation, key)

    exhaustive = q1_claw_attack(n, permutation, cipher, settings.CLAW_DELTA, table_size, rng, exhaustive=True)

    runs = options.trials(200, 100)
    successes, predictions = 0, []
    for run in range(runs):
        attack = ClawKeyRecovery(n, settings.CLAW_DELTA, table_size, retry_cap=1)
        play_attack(attack, permutation, cipher, derive_rng(options.seed, 91, 0, run), name="q1-claw")
        successes += attack.recovered == key
        predictions.append(claw_success_prediction(permutation, cipher.table, settings.CLAW_DELTA, attack.table))
    measured, predicted = successes / runs, float(np.mean(predictions))

    config = _config(options, ExperimentKind.ATTACK, name="q1-claw", n=n, q_e=[2 * table_size],
                     trials=options.trials(50, 20))
    row = cmd_attack(config).rows[0]
    passed = exhaustive.success and abs(measured - predicted) <= 0.1 and row.p_world1 >= 0.5
    detail = (f"exhaustivo={exhaustive.success}, por ejecución {measured:.3f} vs predicción {predicted:.3f}, "
              f"éxito con reintentos {row.p_world1:.2f}")
    return CriterionResult("q1-claw", passed, detail)


@criterion("birthday")
def birthday_criterion(options: SuiteOptions) -> CriterionResult:
    trials = options.trials(200, 50)
    config = _config(options, ExperimentKind.ATTACK, name="birthday", n=16, q_e=[512], q_p=[512], trials=trials)
    rate = cmd_attack(config).rows[0].p_world1
    tolerance = max(0.10, 3.0 * math.sqrt(0.63 * 0.37 / trials))
    return CriterionResult("birthday", abs(rate - 0.63) <= tolerance, f"éxito {rate:.3f} (0.63 ± {tolerance:.2f})")


# ============================================================================
# LEMAS
# ============================================================================

@criterion("resample-perm")
def perm_lemma_criterion(options: SuiteOptions) -> CriterionResult:
    n = 8
    config = _config(options, ExperimentKind.LEMMA, name="resample-perm", n=n, q=[1, 2, 4, 8, 16],
                     trials=options.trials(10_000, 2_000))
    rows = cmd_lemma(config).rows
    bounded = all(_within(row) for row in rows)
    tight = all(row.advantage >= 0.1 * math.sqrt(row.q_p / 2**n) for row in rows if row.q_p >= 4)
    detail = ", ".join(f"q={row.q_p}: {row.advantage:.4f}≤{row.bound:.3f}" for row in rows)
    return CriterionResult("resample-perm", bounded and tight, detail)


@criterion("resample-fn")
def fn_lemma_criterion(options: SuiteOptions) -> CriterionResult:
    config = _config(options, ExperimentKind.LEMMA, name="resample-fn", n=8, m=8, q=[1, 2, 4, 8],
                     trials=options.trials(10_000, 2_000))
    rows = cmd_lemma(config).rows
    detail = ", ".join(f"q={row.q_p}: {row.advantage:.4f}≤{row.bound:.3f}" for row in rows)
    return CriterionResult("resample-fn", all(_within(row) for row in rows), detail)


@criterion("reprogram")
def reprogram_criterion(options: SuiteOptions) -> CriterionResult:
    config = _config(options, ExperimentKind.LEMMA, name="reprogram", n=6, m=6,
                     trials=options.trials(10_000, 2_000))
    rows = cmd_lemma(config).rows
    detail = ", ".join(f"{row.name}: {row.advantage:.4f}≤{row.bound:.3f}" for row in rows)
    return CriterionResult("reprogram", all(_within(row) for row in rows), detail)


# ============================================================================
# HÍBRIDOS Y EVENTOS MALOS
# ============================================================================

@criterion("hybrid-equivalences")
def hybrid_criterion(options: SuiteOptions) -> CriterionResult:
    trials = options.trials(100_000, 20_000)
    runs = [
        {"j": 0, "primed": False},
        {"j": 2, "primed": False},
        {"j": 0, "primed": True},
        {"j": 1, "primed": True},
    ]
    rows = []
    for fields in runs:
        config = _config(options, ExperimentKind.HYBRID, n=3, trials=trials, **fields)
        rows.extend(cmd_hybrid(config).rows)
    failures = []
    for row in rows:
        if row.name.startswith("tv:") and row.advantage > row.bound + row.ci_halfwidth:
            failures.append(f"{row.name}={row.advantage:.4f}")
        if row.name.startswith("identical:") and row.advantage > 0:
            failures.append(f"{row.name}={row.advantage:.4f}")
    checked = sum(1 for row in rows if row.name.startswith(("tv:", "identical:")))
    detail = "; ".join(failures) if failures else f"{checked} equivalencias dentro del umbral"
    return CriterionResult("hybrid-equivalences", not failures, detail)


@criterion("bad-events")
def bad_event_criterion(options: SuiteOptions) -> CriterionResult:
    q_e, q_p, j = 8, 4, 4
    trials = options.trials(10_000, 2_000)
    failures = []
    for point, n in enumerate((6, 8)):
        spec = GameSpec(GameId.EXPT, n, variant=KeyDistribution.TWO_KEY, j=j)
        factory = partial(ClassicalProber, q_e, q_p)
        transcripts = run_trials(factory, spec, trials, options.seed, side=1, point=100 + point,
                                 threads=options.threads)
        caps = {
            "bad1": evaluate_bound("bad-collision", n=n, j=j).clipped,
            "bad2": evaluate_bound("bad-collision", n=n, j=j).clipped,
            "bad3": evaluate_bound("bad-late-query", n=n, q_e=q_e, q_p=q_p, j=j).clipped,
        }
        for flag, cap in caps.items():
            count = sum(getattr(t.bad_flags, flag) for t in transcripts)
            if count / trials > cap + 2 * smoothed_proportion_ci(count, trials):
                failures.append(f"n={n} {flag}={count / trials:.4f}>{cap:.4f}")
    return CriterionResult("bad-events", not failures, "; ".join(failures) or "todas las banderas bajo su cota")


# ============================================================================
# COTA DEL TEOREMA Y ESCALADO
# ============================================================================

@criterion("bound-sweep")
def bound_sweep_criterion(options: SuiteOptions) -> CriterionResult:
    trials = options.trials(1_000, 200)
    failures, checked = [], 0
    for variant in (Variant.TWO_KEY, Variant.FORWARD_ONLY):
        for n in (8, 10, 12):
            config = _config(options, ExperimentKind.SWEEP, name="bound", n=n, variant=variant,
                             q_e=[4, 8], q_p=[12, 24], trials=trials)
            for row in cmd_sweep(config).rows:
                checked += 1
                if not _within(row):
                    failures.append(f"{variant.value} n={n} {row.name}: {row.advantage:.4f}>{row.bound:.4f}")

    config = _config(options, ExperimentKind.SWEEP, name="claw-scaling", n=16, q_e=[10, 18, 34],
                     q_p=[36, 52, 72], trials=options.trials(1_000, 600))
    slope = claw_scaling_slope(cmd_sweep(config).rows)
    if not 0.7 <= slope <= 1.3:
        failures.append(f"pendiente {slope:.3f} fuera de 1.0 ± 0.3")
    detail = "; ".join(failures) or f"{checked} puntos bajo la cota, pendiente {slope:.3f}"
    return CriterionResult("bound-sweep", not failures, detail)


# ============================================================================
# SIMULADOR
# ============================================================================

@criterion("gentle-measurement")
def gentle_criterion(options: SuiteOptions) -> CriterionResult:
    instances = options.trials(1_000, 200)
    results = gentle_measurement_sweep(instances, 32, derive_rng(options.seed, 110))
    violations = sum(1 for _, _, holds in results if not holds)
    return CriterionResult("gentle-measurement", violations == 0, f"{violations} violaciones en {instances}")


@criterion("simulator")
def simulator_criterion(options: SuiteOptions) -> CriterionResult:
    rng = derive_rng(options.seed, 120)
    failures: List[str] = []

    layout = RegisterLayout.of(("x", 4), ("y", 4))
    for _ in range(20):
        table = sample_permutation(4, rng).table
        state = apply_hadamard(init_basis_state(layout, {"y": int(rng.integers(0, 16))}), "x")
        original = state.copy()
        apply_xor_oracle(state, "x", "y", table)
        if abs(state.norm_squared() - 1.0) > settings.NORM_TOLERANCE:
            failures.append("norma")
        apply_xor_oracle(state, "x", "y", table)
        if not states_close(state, original):
            failures.append("involución")

    bit_layout = RegisterLayout.of(("x", 4), ("y", 1))
    for _ in range(20):
        predicate = rng.integers(0, 2, size=16)
        minus = apply_hadamard(init_basis_state(bit_layout, {"y": 1}), "y")
        minus = apply_hadamard(minus, "x")
        phase = minus.copy()
        apply_xor_oracle(minus, "x", "y", predicate)
        apply_phase_oracle(phase, "x", predicate.astype(bool))
        if not states_close(minus, phase):
            failures.append("fase/XOR")

    n = 3
    permutation = sample_permutation(n, rng)
    for s0 in range(1 << n):
        for s1 in range(1 << n):
            swap = make_swap(n, s0, s1)
            if swap_after(permutation, s0, s1) != compose(permutation, swap):
                failures.append("conjugación por swap")
            if compose(swap, swap) != identity_permutation(n):
                failures.append("swap involutivo")

    for _ in range(500):
        n = int(rng.integers(3, 5))
        permutation = sample_permutation(n, rng)
        key = sample_key(KeyDistribution.TWO_KEY, n, rng)
        size = int(rng.integers(1, (1 << n) // 2 + 1))
        xs = rng.choice(1 << n, size=size, replace=False)
        ys = rng.choice(1 << n, size=size, replace=False)
        transcript = Transcript(zip(xs.tolist(), ys.tolist()))
        if internal_collision(permutation, transcript, key) is not None:
            continue
        programmed = perm_reprogram(permutation, transcript, key)
        if any(em_forward(programmed, key, x) != y for x, y in transcript):
            failures.append("programación de la transcripción")

    detail = ", ".join(sorted(set(failures))) or "todas las propiedades se cumplen"
    return CriterionResult("simulator", not failures, detail)


# ============================================================================
# COMANDO
# ============================================================================

def run_suite(options: SuiteOptions, names=None) -> List[CriterionResult]:
    results = []
    for name in names or CRITERIA:
        started = time.perf_counter()
        result = CRITERIA[name](options)
        result.seconds = time.perf_counter() - started
        mark = "✅" if result.passed else "❌"
        logger.info("%s %s (%.1f s): %s", mark, name, result.seconds, result.detail)
        results.append(result)
    return results


@router.command("selftest")
def cmd_selftest(config: ExperimentConfig) -> CommandResult:
    """Ejecuta todos los criterios; código 0 si todos pasan, 1 si alguno falla"""
    options = SuiteOptions(quick=config.quick, seed=config.seed, threads=config.threads)
    results = run_suite(options)
    failed = [result.name for result in results if not result.passed]
    if failed:
        logger.error("Criterios fallidos: %s", ", ".join(failed))
        return CommandResult(exit_code=1)
    logger.info("🎉 %d criterios superados", len(results))
    return CommandResult(exit_code=0)
