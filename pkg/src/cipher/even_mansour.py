"""
Cifrado Even-Mansour E_{k1,k2}(x) = P(x ⊕ k1) ⊕ k2 y su variante de solo ida
E_k[F](x) = F(x ⊕ k) sobre una función aleatoria.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..utils.errors import WidthError
from .permutation import FunctionTable, Permutation


class KeyDistribution(str, Enum):
    """Regla de muestreo de la clave"""

    TWO_KEY = "two-key"
    ONE_KEY = "one-key"


@dataclass(frozen=True)
class Key:
    """Par de subclaves (k1, k2) de n bits"""

    n: int
    k1: int
    k2: int

    def __post_init__(self):
        for label, value in (("k1", self.k1), ("k2", self.k2)):
            if not 0 <= value < (1 << self.n):
                raise WidthError(f"{label}={value} no cabe en {self.n} bits")


def sample_key(dist: KeyDistribution, n: int, rng: np.random.Generator) -> Key:
    """Dos subclaves uniformes independientes, o k2 = k1 en la variante de una clave"""
    k1 = int(rng.integers(0, 1 << n))
    return Key(n, k1, sample_k2_given_k1(dist, n, k1, rng))


def sample_k2_given_k1(dist: KeyDistribution, n: int, k1: int, rng: np.random.Generator) -> int:
    """k2 ← D_{|k1}"""
    if KeyDistribution(dist) is KeyDistribution.ONE_KEY:
        return k1
    return int(rng.integers(0, 1 << n))


def sample_k1_given_k2(dist: KeyDistribution, n: int, k2: int, rng: np.random.Generator) -> int:
    """k1 ← D_{|k2}"""
    if KeyDistribution(dist) is KeyDistribution.ONE_KEY:
        return k2
    return int(rng.integers(0, 1 << n))


def _check_key(permutation: Permutation, key: Key) -> None:
    if permutation.n != key.n:
        raise WidthError(f"Clave de {key.n} bits para permutación de {permutation.n} bits")


def em_forward(permutation: Permutation, key: Key, x: int) -> int:
    _check_key(permutation, key)
    return int(permutation.table[x ^ key.k1]) ^ key.k2


def em_inverse(permutation: Permutation, key: Key, y: int) -> int:
    _check_key(permutation, key)
    return int(permutation.inverse_table[y ^ key.k2]) ^ key.k1


def em_table(permutation: Permutation, key: Key) -> np.ndarray:
    """Tabla completa de E_k[P]"""
    _check_key(permutation, key)
    domain = np.arange(1 << key.n, dtype=np.int64)
    return permutation.table[domain ^ key.k1] ^ key.k2


def em_permutation(permutation: Permutation, key: Key) -> Permutation:
    return Permutation(key.n, em_table(permutation, key))


def fwd_only_encrypt(function: FunctionTable, k: int, x: int) -> int:
    """E_k[F](x) = F(x ⊕ k)"""
    return int(function.table[x ^ k])


def fwd_only_table(function: FunctionTable, k: int) -> np.ndarray:
    domain = np.arange(1 << function.m, dtype=np.int64)
    return function.table[domain ^ k]


def key_to_hex(key: Key) -> str:
    """Dos líneas en hexadecimal minúscula: k1 y k2"""
    return f"{key.k1:x}\n{key.k2:x}\n"


def key_from_hex(text: str, n: int) -> Key:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if len(lines) != 2:
        raise WidthError("Un volcado de clave tiene exactamente dos líneas")
    return Key(n, int(lines[0], 16), int(lines[1], 16))
