"""
Objetos combinatorios clásicos: permutaciones, cifrado y reprogramación
"""
from .permutation import (
    Permutation,
    FunctionTable,
    identity_permutation,
    sample_permutation,
    sample_function,
    make_swap,
    compose,
    invert,
    swap_after,
    permutation_to_hex,
    permutation_from_hex,
)
from .even_mansour import (
    Key,
    KeyDistribution,
    sample_key,
    sample_k1_given_k2,
    sample_k2_given_k1,
    em_forward,
    em_inverse,
    em_table,
    em_permutation,
    fwd_only_encrypt,
    fwd_only_table,
    key_to_hex,
    key_from_hex,
)
from .reprogramming import (
    Transcript,
    ReprogramSet,
    perm_reprogram,
    fn_reprogram_set,
    fn_reprogram_point,
    fwd_only_reprogram,
    internal_collision,
)

__all__ = [
    "Permutation",
    "FunctionTable",
    "identity_permutation",
    "sample_permutation",
    "sample_function",
    "make_swap",
    "compose",
    "invert",
    "swap_after",
    "permutation_to_hex",
    "permutation_from_hex",
    "Key",
    "KeyDistribution",
    "sample_key",
    "sample_k1_given_k2",
    "sample_k2_given_k1",
    "em_forward",
    "em_inverse",
    "em_table",
    "em_permutation",
    "fwd_only_encrypt",
    "fwd_only_table",
    "key_to_hex",
    "key_from_hex",
    "Transcript",
    "ReprogramSet",
    "perm_reprogram",
    "fn_reprogram_set",
    "fn_reprogram_point",
    "fwd_only_reprogram",
    "internal_collision",
]
