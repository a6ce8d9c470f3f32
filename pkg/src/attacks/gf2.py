"""
Álgebra lineal sobre GF(2) con filas como enteros de n bits
"""
from dataclasses import dataclass, field
from typing import Iterable, List, Tuple

from ..config import settings
from ..utils.errors import ConfigError, WidthError


def parity(u: int, v: int) -> int:
    """Producto interno u·v sobre GF(2)"""
    return bin(int(u) & int(v)).count("1") & 1


@dataclass
class GF2Matrix:
    """Matriz de filas de n bits (bit i = columna i)"""

    n: int
    rows: List[int] = field(default_factory=list)

    def __post_init__(self):
        rows = list(self.rows)
        self.rows = []
        for row in rows:
            self.append(row)

    def append(self, row: int) -> None:
        row = int(row)
        if not 0 <= row < (1 << self.n):
            raise WidthError(f"Fila {row:#x} fuera de {self.n} bits")
        if len(self.rows) >= settings.GF2_MAX_ROWS:
            raise ConfigError(f"La matriz excede {settings.GF2_MAX_ROWS} filas")
        self.rows.append(row)

    def multiply(self, v: int) -> List[int]:
        """M·v, una paridad por fila"""
        return [parity(row, v) for row in self.rows]

    def __len__(self) -> int:
        return len(self.rows)


def _reduce(n: int, rows: Iterable[int]) -> Tuple[List[int], List[int]]:
    """Forma escalonada reducida: (filas pivote, columna pivote de cada una)"""
    pivots: List[int] = []
    reduced: List[int] = []
    for row in rows:
        for pivot_row, col in zip(reduced, pivots):
            if row >> col & 1:
                row ^= pivot_row
        if not row:
            continue
        col = row.bit_length() - 1
        for index, pivot_row in enumerate(reduced):
            if pivot_row >> col & 1:
                reduced[index] = pivot_row ^ row
        reduced.append(row)
        pivots.append(col)
    return reduced, pivots


def gf2_rank(matrix: GF2Matrix) -> int:
    return len(_reduce(matrix.n, matrix.rows)[0])


def gf2_nullspace(matrix: GF2Matrix) -> List[int]:
    """
    Base de {v : M·v = 0}; su tamaño es n − rango(M).

    Cada columna libre f aporta el vector con el bit f encendido más las
    columnas pivote cuya fila reducida contiene f.
    """
    reduced, pivots = _reduce(matrix.n, matrix.rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(matrix.n):
        if free in pivot_set:
            continue
        v = 1 << free
        for row, col in zip(reduced, pivots):
            if row >> free & 1:
                v |= 1 << col
        basis.append(v)
    return basis


def span(basis: List[int]) -> List[int]:
    """Todos los vectores generados por la base (incluye 0)"""
    vectors = [0]
    for b in basis:
        vectors += [v ^ b for v in vectors]
    return vectors
