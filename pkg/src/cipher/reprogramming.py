"""
Transcripciones clásicas y construcciones de reprogramación

- P_{T,k}: composición ordenada de transposiciones que programa P para que
  E_k[P_{T,k}](x_i) = y_i (salvo colisiones internas).
- F^{(B)} y F_{s↦y}: reprogramación de funciones por conjunto o por punto.
- F_{T,k} de la variante de solo ida: F(x) = y si (x ⊕ k, y) ∈ T.
"""
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Tuple

from ..utils.errors import ReprogramSetError, TranscriptError, WidthError
from .even_mansour import Key
from .permutation import FunctionTable, Permutation


class Transcript:
    """
    Lista ordenada de pares (x, y) de consultas clásicas.

    Por defecto entradas y salidas son distintas. `require_distinct_outputs`
    se relaja para oráculos que son funciones; `require_distinct_inputs` solo
    para el registro de un juego que mezcla respuestas de mundos distintos.
    """

    def __init__(
        self,
        entries: Iterable[Tuple[int, int]] = (),
        require_distinct_outputs: bool = True,
        require_distinct_inputs: bool = True,
    ):
        self.require_distinct_outputs = require_distinct_outputs
        self.require_distinct_inputs = require_distinct_inputs
        self._entries: List[Tuple[int, int]] = []
        self._inputs: dict = {}
        self._outputs: dict = {}
        for x, y in entries:
            self.append(x, y)

    def append(self, x: int, y: int) -> None:
        x, y = int(x), int(y)
        if self.require_distinct_inputs and x in self._inputs:
            raise TranscriptError(f"Entrada repetida en la transcripción: {x}")
        if self.require_distinct_outputs and y in self._outputs:
            raise TranscriptError(f"Salida repetida en la transcripción: {y}")
        self._entries.append((x, y))
        self._inputs[x] = self._inputs.get(x, 0) + 1
        self._outputs[y] = self._outputs.get(y, 0) + 1

    @property
    def entries(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(self._entries)

    @property
    def inputs(self) -> List[int]:
        return [x for x, _ in self._entries]

    @property
    def outputs(self) -> List[int]:
        return [y for _, y in self._entries]

    def has_input(self, x: int) -> bool:
        return x in self._inputs

    def has_output(self, y: int) -> bool:
        return y in self._outputs

    def has_distinct_outputs(self) -> bool:
        return all(count == 1 for count in self._outputs.values())

    def has_distinct_inputs(self) -> bool:
        return all(count == 1 for count in self._inputs.values())

    def prefix(self, length: int) -> "Transcript":
        return Transcript(self._entries[:length], self.require_distinct_outputs, self.require_distinct_inputs)

    def extended(self, x: int, y: int) -> "Transcript":
        """Copia con un par adicional"""
        copy = self.prefix(len(self))
        copy.append(x, y)
        return copy

    def validate_strict(self) -> "Transcript":
        if not self.has_distinct_inputs():
            raise TranscriptError("La transcripción contiene entradas repetidas")
        if not self.has_distinct_outputs():
            raise TranscriptError("La transcripción contiene salidas repetidas")
        return self

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self._entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, Transcript) and self._entries == other._entries

    def __repr__(self) -> str:
        return f"Transcript({self._entries})"


@dataclass(frozen=True)
class ReprogramSet:
    """Conjunto B de pares (entrada, salida) con entradas únicas"""

    pairs: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        pairs = tuple((int(x), int(y)) for x, y in self.pairs)
        inputs = [x for x, _ in pairs]
        if len(set(inputs)) != len(inputs):
            raise ReprogramSetError(f"Entradas repetidas en el conjunto de reprogramación: {sorted(inputs)}")
        object.__setattr__(self, "pairs", pairs)

    @property
    def inputs(self) -> frozenset:
        """B_1"""
        return frozenset(x for x, _ in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


# ============================================================================
# REPROGRAMACIÓN DE PERMUTACIONES
# ============================================================================

def perm_reprogram(permutation: Permutation, transcript: Transcript, key: Key) -> Permutation:
    """
    P_{T,k} = swap_{P(x_1⊕k1), y_1⊕k2} ∘ ⋯ ∘ swap_{P(x_t⊕k1), y_t⊕k2} ∘ P.

    Se aplica la composición tal cual, incluso con colisiones internas.

    Raises:
        TranscriptError: Entradas o salidas repetidas
    """
    if permutation.n != key.n:
        raise WidthError(f"Clave de {key.n} bits para permutación de {permutation.n} bits")
    transcript.validate_strict()
    if not len(transcript):
        return permutation

    table = permutation.table.copy()
    inverse = permutation.inverse_table.copy()
    for x, y in reversed(transcript.entries):
        a = int(permutation.table[x ^ key.k1])
        b = y ^ key.k2
        if a == b:
            continue
        pos_a, pos_b = inverse[a], inverse[b]
        table[pos_a], table[pos_b] = b, a
        inverse[a], inverse[b] = pos_b, pos_a
    return Permutation(permutation.n, table)


# ============================================================================
# REPROGRAMACIÓN DE FUNCIONES
# ============================================================================

def _check_pair(function: FunctionTable, x: int, y: int) -> None:
    if not 0 <= x < (1 << function.m):
        raise WidthError(f"Entrada {x} fuera de {function.m} bits")
    if not 0 <= y < (1 << function.n):
        raise WidthError(f"Salida {y} fuera de {function.n} bits")


def fn_reprogram_set(function: FunctionTable, reprogram: ReprogramSet) -> FunctionTable:
    """F^{(B)}(x) = y si (x, y) ∈ B; F(x) en otro caso"""
    if not len(reprogram):
        return function
    table = function.table.copy()
    for x, y in reprogram.pairs:
        _check_pair(function, x, y)
        table[x] = y
    return FunctionTable(function.m, function.n, table)


def fn_reprogram_point(function: FunctionTable, s: int, y: int) -> FunctionTable:
    """F_{s↦y}"""
    return fn_reprogram_set(function, ReprogramSet(((s, y),)))


def fwd_only_reprogram(function: FunctionTable, transcript: Transcript, k: int) -> FunctionTable:
    """F_{T,k}(x) = y si (x ⊕ k, y) ∈ T; F(x) en otro caso (se admiten salidas repetidas)"""
    if not transcript.has_distinct_inputs():
        raise TranscriptError("La transcripción contiene entradas repetidas")
    if not len(transcript):
        return function
    table = function.table.copy()
    for x, y in transcript:
        _check_pair(function, x ^ k, y)
        table[x ^ k] = y
    return FunctionTable(function.m, function.n, table)


def internal_collision(permutation: Permutation, transcript: Transcript, key: Key) -> Optional[Tuple[int, int]]:
    """Primer par (i, j), i ≠ j, con P(x_i ⊕ k1) = y_j ⊕ k2, o None"""
    starts = {int(permutation.table[x ^ key.k1]): i for i, (x, _) in enumerate(transcript)}
    for j, (_, y) in enumerate(transcript):
        i = starts.get(y ^ key.k2)
        if i is not None and i != j:
            return i, j
    return None
