"""
Ataques de recuperación de clave y maquinaria de GF(2) y Grover
"""
from .gf2 import GF2Matrix, gf2_nullspace, gf2_rank, parity, span
from .grover import (
    grover_iterations,
    grover_multi_target,
    grover_search,
    grover_success_probability,
)
from .oracles import FixedOracleWorld, KeyRecoveryAttack, attack_result, play_attack
from .simon import SimonKeyRecovery, simon_q2_attack
from .claw import ClawKeyRecovery, canonical_points, claw_success_prediction, q1_claw_attack
from .birthday import BirthdayKeyRecovery, classical_birthday_attack
from .distinguishers import ATTACK_IDS, attack_as_distinguisher, loglog_slope

__all__ = [
    "GF2Matrix",
    "gf2_nullspace",
    "gf2_rank",
    "parity",
    "span",
    "grover_iterations",
    "grover_multi_target",
    "grover_search",
    "grover_success_probability",
    "FixedOracleWorld",
    "KeyRecoveryAttack",
    "attack_result",
    "play_attack",
    "SimonKeyRecovery",
    "simon_q2_attack",
    "ClawKeyRecovery",
    "canonical_points",
    "claw_success_prediction",
    "q1_claw_attack",
    "BirthdayKeyRecovery",
    "classical_birthday_attack",
    "ATTACK_IDS",
    "attack_as_distinguisher",
    "loglog_slope",
]
