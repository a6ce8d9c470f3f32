"""
Permutaciones y funciones sobre cadenas de n bits

Ambas se representan como tablas densas int64 inmutables; las operaciones
devuelven objetos nuevos.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..config import settings
from ..utils.errors import WidthError
from ..utils.export import dump_hex_table, parse_hex_table


def _check_width(n: int, label: str = "n") -> int:
    if not 0 <= n <= settings.MAX_PERMUTATION_BITS:
        raise WidthError(f"{label}={n} fuera del rango 0..{settings.MAX_PERMUTATION_BITS}")
    return int(n)


def _frozen(table: np.ndarray) -> np.ndarray:
    table = np.array(table, dtype=np.int64, copy=True)
    table.setflags(write=False)
    return table


@dataclass(frozen=True, eq=False)
class Permutation:
    """Biyección sobre {0, …, 2^n − 1}"""

    n: int
    table: np.ndarray

    def __post_init__(self):
        _check_width(self.n)
        table = _frozen(self.table)
        size = 1 << self.n
        if table.shape != (size,):
            raise WidthError(f"La tabla debe tener {size} entradas")
        seen = np.zeros(size, dtype=bool)
        if table.min() < 0 or table.max() >= size:
            raise WidthError(f"Valores fuera de {self.n} bits")
        seen[table] = True
        if not seen.all():
            raise WidthError("La tabla no es una biyección")
        object.__setattr__(self, "table", table)

    @cached_property
    def inverse_table(self) -> np.ndarray:
        inverse = np.empty_like(self.table)
        inverse[self.table] = np.arange(self.table.size, dtype=np.int64)
        inverse.setflags(write=False)
        return inverse

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def inverse(self, y: int) -> int:
        return int(self.inverse_table[y])

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.n, self.table.tobytes()))


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """Función de cadenas de m bits a cadenas de n bits"""

    m: int
    n: int
    table: np.ndarray

    def __post_init__(self):
        _check_width(self.m, "m")
        _check_width(self.n)
        table = _frozen(self.table)
        if table.shape != (1 << self.m,):
            raise WidthError(f"La tabla debe tener {1 << self.m} entradas")
        if table.size and (table.min() < 0 or table.max() >= (1 << self.n)):
            raise WidthError(f"Valores fuera de {self.n} bits")
        object.__setattr__(self, "table", table)

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FunctionTable)
            and (self.m, self.n) == (other.m, other.n)
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self) -> int:
        return hash((self.m, self.n, self.table.tobytes()))


# ============================================================================
# CONSTRUCTORES
# ============================================================================

def identity_permutation(n: int) -> Permutation:
    return Permutation(n, np.arange(1 << _check_width(n), dtype=np.int64))


def sample_permutation(n: int, rng: np.random.Generator) -> Permutation:
    """Permutación uniforme (Fisher-Yates de numpy)"""
    return Permutation(n, rng.permutation(1 << _check_width(n)).astype(np.int64))


def sample_function(m: int, n: int, rng: np.random.Generator) -> FunctionTable:
    """Función uniforme de m bits a n bits"""
    _check_width(m, "m")
    _check_width(n)
    return FunctionTable(m, n, rng.integers(0, 1 << n, size=1 << m, dtype=np.int64))


def make_swap(n: int, a: int, b: int) -> Permutation:
    """Transposición que intercambia a y b (identidad si a = b)"""
    size = 1 << _check_width(n)
    if not (0 <= a < size and 0 <= b < size):
        raise WidthError(f"({a}, {b}) fuera de {n} bits")
    table = np.arange(size, dtype=np.int64)
    table[a], table[b] = b, a
    return Permutation(n, table)


def compose(outer: Permutation, inner: Permutation) -> Permutation:
    """(outer ∘ inner)(x) = outer(inner(x))"""
    if outer.n != inner.n:
        raise WidthError(f"Anchos distintos: {outer.n} y {inner.n}")
    return Permutation(outer.n, outer.table[inner.table])


def invert(permutation: Permutation) -> Permutation:
    return Permutation(permutation.n, permutation.inverse_table)


def swap_after(permutation: Permutation, s0: int, s1: int) -> Permutation:
    """P ∘ swap_{s0,s1} sin construir la transposición"""
    table = permutation.table.copy()
    table[s0], table[s1] = permutation.table[s1], permutation.table[s0]
    return Permutation(permutation.n, table)


# ============================================================================
# VOLCADOS HEXADECIMALES
# ============================================================================

def permutation_to_hex(permutation: Permutation) -> str:
    return dump_hex_table(permutation.table)


def permutation_from_hex(text: str, n: int) -> Permutation:
    return Permutation(n, parse_hex_table(text, n))
