"""
Juegos de distinguibilidad, cotas y estimación Monte-Carlo
"""
from .actions import (
    ClassicalQuery,
    Direction,
    Distinguisher,
    FinalGuess,
    GameView,
    NextPhase,
    QuantumProgram,
)
from .engine import BadFlags, GameTranscript, OracleWorld, QuantumContext, play_game
from .even_mansour import (
    World,
    run_em_game,
    run_expt,
    run_forward_hybrid,
    run_forward_only_game,
    run_hybrid,
)
from .lemmas import (
    ReprogrammingDistinguisher,
    ReprogrammingSetup,
    reprogramming_epsilon,
    run_arbitrary_reprogramming_game,
    run_fn_resampling_game,
    run_perm_resampling_game,
)
from .bounds import BOUND_FORMULAS, compute_bound, evaluate_bound
from .estimation import (
    GameId,
    GameSpec,
    compare_experiments,
    estimate_advantage,
    flag_frequencies,
    run_game,
    stage_expectations,
    total_variation,
    tv_noise_floor,
)

__all__ = [
    "ClassicalQuery",
    "Direction",
    "Distinguisher",
    "FinalGuess",
    "GameView",
    "NextPhase",
    "QuantumProgram",
    "BadFlags",
    "GameTranscript",
    "OracleWorld",
    "QuantumContext",
    "play_game",
    "World",
    "run_em_game",
    "run_expt",
    "run_forward_hybrid",
    "run_forward_only_game",
    "run_hybrid",
    "ReprogrammingDistinguisher",
    "ReprogrammingSetup",
    "reprogramming_epsilon",
    "run_arbitrary_reprogramming_game",
    "run_fn_resampling_game",
    "run_perm_resampling_game",
    "BOUND_FORMULAS",
    "compute_bound",
    "evaluate_bound",
    "GameId",
    "GameSpec",
    "compare_experiments",
    "estimate_advantage",
    "flag_frequencies",
    "run_game",
    "stage_expectations",
    "total_variation",
    "tv_noise_floor",
]
