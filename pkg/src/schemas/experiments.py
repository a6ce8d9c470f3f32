"""
Schemas de experimentos y resultados
"""
from enum import Enum
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator

from ..cipher.even_mansour import Key


class ExperimentKind(str, Enum):
    ATTACK = "attack"
    LEMMA = "lemma"
    HYBRID = "hybrid"
    SWEEP = "sweep"
    SELFTEST = "selftest"


class Variant(str, Enum):
    TWO_KEY = "two-key"
    ONE_KEY = "one-key"
    FORWARD_ONLY = "forward-only"


def _int_list(value) -> List[int]:
    """Acepta un entero, una lista o una cadena separada por comas"""
    if value is None:
        return []
    if isinstance(value, int):
        return [value]
    if isinstance(value, str):
        return [int(part) for part in value.split(",") if part.strip()]
    return [int(v) for v in value]


class ExperimentConfig(BaseModel):
    """Configuración de una invocación de la CLI"""
    experiment: ExperimentKind = Field(..., description="Tipo de experimento")
    name: Optional[str] = Field(None, description="Ataque, juego o barrido concreto")
    n: int = Field(8, description="Ancho de bloque en bits")
    m: Optional[int] = Field(None, description="Ancho de entrada de la función (por defecto n)")
    variant: Variant = Field(Variant.TWO_KEY, description="Distribución de claves o variante de solo ida")
    q_e: List[int] = Field(default_factory=list, description="Consultas clásicas (lista)")
    q_p: List[int] = Field(default_factory=list, description="Consultas cuánticas (lista)")
    q: List[int] = Field(default_factory=list, description="Consultas de los juegos de remuestreo (lista)")
    j: int = Field(0, description="Índice de híbrido")
    primed: bool = Field(False, description="Usar la variante primada H'_j / Expt'_j")
    trials: int = Field(1000, description="Ensayos por punto")
    seed: int = Field(0, description="Semilla maestra de 64 bits")
    out: Optional[Path] = Field(None, description="Ruta del CSV (por defecto salida estándar)")
    threads: int = Field(0, description="Procesos de trabajo (0 = núcleos lógicos)")
    quick: bool = Field(False, description="Selftest con menos ensayos")

    @field_validator("q_e", "q_p", "q", mode="before")
    @classmethod
    def _parse_lists(cls, value):
        return _int_list(value)

    @property
    def input_bits(self) -> int:
        return self.n if self.m is None else self.m

    class Config:
        json_schema_extra = {
            "example": {
                "experiment": "lemma",
                "name": "resample-perm",
                "n": 8,
                "q": [1, 2, 4, 8],
                "trials": 10000,
                "seed": 7
            }
        }


class ResultRow(BaseModel):
    """Fila del CSV de resultados (el orden de campos es el de las columnas)"""
    experiment: str = Field(..., description="Tipo de experimento")
    name: str = Field(..., description="Nombre del punto medido")
    n: int = Field(..., description="Ancho de bloque")
    variant: str = Field(..., description="Variante")
    q_e: int = Field(0, description="Consultas clásicas")
    q_p: int = Field(0, description="Consultas cuánticas")
    j: int = Field(0, description="Índice de híbrido")
    trials: int = Field(..., description="Ensayos por mundo")
    p_world1: float = Field(..., description="Frecuencia de apuesta 1 en el mundo 1 (o tasa de éxito)")
    p_world0: float = Field(..., description="Frecuencia de apuesta 1 en el mundo 0 (o falsa aceptación)")
    advantage: float = Field(..., description="|p_world1 − p_world0| o distancia de variación total")
    ci_halfwidth: float = Field(..., description="Semiancho del intervalo al 95%")
    bound: float = Field(..., description="Cota aplicable recortada a [0, 1]")
    seed: int = Field(..., description="Semilla maestra")
    wall_time_ms: float = Field(..., description="Tiempo de pared en milisegundos")
    vacuous: bool = Field(False, description="La cota sin recortar es ≥ 1")

    class Config:
        json_schema_extra = {
            "example": {
                "experiment": "lemma",
                "name": "resample-perm",
                "n": 8,
                "variant": "two-key",
                "q_e": 0,
                "q_p": 4,
                "j": 0,
                "trials": 10000,
                "p_world1": 0.0312,
                "p_world0": 0.0,
                "advantage": 0.0312,
                "ci_halfwidth": 0.0034,
                "bound": 0.5,
                "seed": 7,
                "wall_time_ms": 812.4,
                "vacuous": False
            }
        }


RESULT_COLUMNS: List[str] = list(ResultRow.model_fields)


class AdvantageEstimate(BaseModel):
    """Estimación Monte-Carlo de la ventaja de un distinguidor"""
    p_world1: float = Field(..., ge=0.0, le=1.0, description="Frecuencia de apuesta 1 en el mundo 1")
    p_world0: float = Field(..., ge=0.0, le=1.0, description="Frecuencia de apuesta 1 en el mundo 0")
    advantage: float = Field(..., description="|p_world1 − p_world0|")
    ci_halfwidth: float = Field(..., gt=0.0, description="Semiancho del intervalo normal al 95%")
    trials: int = Field(..., description="Ensayos por mundo")
    bound: float = Field(..., description="Cota aplicable recortada a [0, 1]")
    raw_bound: float = Field(..., description="Cota sin recortar")
    vacuous: bool = Field(..., description="raw_bound ≥ 1")

    def within_bound(self, slack: float = 2.0) -> bool:
        """advantage ≤ bound + slack·ci_halfwidth"""
        return self.advantage <= self.bound + slack * self.ci_halfwidth


class CommandResult(BaseModel):
    """Salida de un comando: filas de resultados y código de salida"""
    rows: List[ResultRow] = Field(default_factory=list, description="Filas del CSV")
    exit_code: int = Field(0, description="0 éxito, 1 criterio fallido, 2 error de configuración")


class AttackResult(BaseModel):
    """Resultado de un ataque de recuperación de clave"""
    recovered_key: Optional[Key] = Field(None, description="Clave verificada, si la hubo")
    success: bool = Field(..., description="Se encontró una clave que verifica")
    classical_queries_used: int = Field(..., description="Consultas clásicas a E")
    quantum_queries_used: int = Field(..., description="Consultas cuánticas (a P, y a E en modo Q2)")
    trials_inner: int = Field(1, description="Iteraciones o reintentos internos")

    class Config:
        arbitrary_types_allowed = True
