"""
Núcleo de simulación cuántica
"""
from .statevector import (
    RegisterLayout,
    StateVector,
    init_basis_state,
    apply_hadamard,
    apply_xor_oracle,
    apply_controlled_xor_oracle,
    apply_phase_oracle,
    apply_diffusion,
    measure_register,
    probability_of,
    register_distribution,
    states_close,
    uniform_superposition,
    predicate_mask,
)
from .dense import (
    DenseOperator,
    gentle_measurement_check,
    gentle_measurement_sweep,
    random_gentle_instance,
    random_projector,
    random_state,
)
from .adaptive import AdaptiveRun, run_adaptive_rounds

__all__ = [
    "RegisterLayout",
    "StateVector",
    "init_basis_state",
    "apply_hadamard",
    "apply_xor_oracle",
    "apply_controlled_xor_oracle",
    "apply_phase_oracle",
    "apply_diffusion",
    "measure_register",
    "probability_of",
    "register_distribution",
    "states_close",
    "uniform_superposition",
    "predicate_mask",
    "DenseOperator",
    "gentle_measurement_check",
    "gentle_measurement_sweep",
    "random_gentle_instance",
    "random_projector",
    "random_state",
    "AdaptiveRun",
    "run_adaptive_rounds",
]
