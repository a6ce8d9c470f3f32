"""
Operadores densos pequeños y la comprobación de medición suave

Para una secuencia de proyectores P_1, …, P_q y un estado |ψ⟩ se compara
1 − |⟨ψ|P_q⋯P_1|ψ⟩|² con 1 − (1 − min(1, s))², donde s = Σ √ε_i y ε_i acota
‖(1 − P_i)|ψ⟩‖². La cota sale de ψ − P_q⋯P_1ψ = Σ_i P_q⋯P_{i+1}(1 − P_i)ψ,
que da |⟨ψ|P_q⋯P_1|ψ⟩| ≥ 1 − s. La forma lineal Σ ε_i no basta: con un solo
proyector el lado izquierdo vale 2ε − ε².
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import settings
from ..utils.errors import NotAProjectorError, WidthError

logger = logging.getLogger(__name__)

GENTLE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DenseOperator:
    """Matriz compleja dim×dim"""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise WidthError(f"Operador no cuadrado: {entries.shape}")
        if entries.shape[0] > settings.MAX_DENSE_DIM:
            raise WidthError(f"Dimensión {entries.shape[0]} excede {settings.MAX_DENSE_DIM}")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "DenseOperator":
        return cls(np.eye(dim, dtype=np.complex128))

    def is_projector(self, tol: float = GENTLE_TOLERANCE) -> bool:
        m = self.entries
        return bool(np.allclose(m @ m, m, atol=tol, rtol=0.0) and np.allclose(m, m.conj().T, atol=tol, rtol=0.0))

    def require_projector(self) -> "DenseOperator":
        if not self.is_projector():
            raise NotAProjectorError("El operador no satisface M² = M = M†")
        return self


def _normalized(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > settings.NORM_TOLERANCE:
        raise WidthError(f"Estado no normalizado (‖ψ‖ = {norm:.12f})")
    return psi


def gentle_measurement_check(
    psi: np.ndarray,
    projectors: Sequence[DenseOperator],
    epsilons: Optional[Sequence[float]] = None,
) -> Tuple[float, float, bool]:
    """
    Evalúa la desigualdad de medición suave para una instancia.

    Args:
        psi: Estado normalizado de dimensión dim
        projectors: P_1, …, P_q aplicados en ese orden
        epsilons: Cotas ε_i; si se omiten se usan los valores exactos ‖(1 − P_i)ψ‖²

    Returns:
        (lhs, rhs, holds) con rhs = 1 − (1 − min(1, Σ √ε_i))² y holds = lhs ≤ rhs + 1e−9

    Raises:
        NotAProjectorError: Algún operador no es proyector
    """
    psi = _normalized(psi)
    for projector in projectors:
        projector.require_projector()
        if projector.dim != psi.size:
            raise WidthError(f"Proyector de dimensión {projector.dim} para estado de dimensión {psi.size}")

    exact = [float(np.linalg.norm(psi - p.entries @ psi) ** 2) for p in projectors]
    if epsilons is None:
        epsilons = exact
    elif len(epsilons) != len(projectors):
        raise WidthError("Se requiere un ε por proyector")

    vector = psi
    for projector in projectors:
        vector = projector.entries @ vector
    lhs = 1.0 - abs(np.vdot(psi, vector)) ** 2
    spread = min(1.0, float(sum(np.sqrt(np.maximum(epsilons, 0.0)))))
    rhs = 1.0 - (1.0 - spread) ** 2
    return float(lhs), rhs, bool(lhs <= rhs + GENTLE_TOLERANCE)


# ============================================================================
# INSTANCIAS ALEATORIAS
# ============================================================================

def random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    vector = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vector / np.linalg.norm(vector)


def random_projector(dim: int, rank: int, rng: np.random.Generator) -> DenseOperator:
    """Proyector ortogonal sobre un subespacio aleatorio de rango `rank`"""
    if not 0 <= rank <= dim:
        raise WidthError(f"Rango {rank} inválido para dimensión {dim}")
    if rank == 0:
        return DenseOperator(np.zeros((dim, dim), dtype=np.complex128))
    gaussian = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    basis, _ = np.linalg.qr(gaussian)
    return DenseOperator(basis @ basis.conj().T)


def random_gentle_instance(
    dim: int, count: int, rng: np.random.Generator
) -> Tuple[np.ndarray, List[DenseOperator]]:
    """
    Estado y lista de proyectores aleatorios.

    La mitad de los proyectores contiene una perturbación de ψ en su imagen,
    para que aparezcan tanto casos casi suaves como casos con ε grande.
    """
    psi = random_state(dim, rng)
    projectors = []
    for _ in range(count):
        rank = int(rng.integers(1, dim + 1))
        if rank < dim and rng.random() < 0.5:
            near = psi + 0.3 * random_state(dim, rng)
            others = rng.normal(size=(dim, rank - 1)) + 1j * rng.normal(size=(dim, rank - 1))
            basis, _ = np.linalg.qr(np.column_stack([near, others]))
            projectors.append(DenseOperator(basis @ basis.conj().T))
        else:
            projectors.append(random_projector(dim, rank, rng))
    return psi, projectors


def gentle_measurement_sweep(
    instances: int, max_dim: int, rng: np.random.Generator, max_projectors: int = 6
) -> List[Tuple[float, float, bool]]:
    """Resultados de `gentle_measurement_check` sobre instancias aleatorias"""
    results = []
    for _ in range(instances):
        dim = int(rng.integers(2, max_dim + 1))
        count = int(rng.integers(1, max_projectors + 1))
        psi, projectors = random_gentle_instance(dim, count, rng)
        results.append(gentle_measurement_check(psi, projectors))
    violations = sum(1 for _, _, holds in results if not holds)
    if violations:
        logger.warning("Medición suave violada en %d de %d instancias", violations, instances)
    return results
