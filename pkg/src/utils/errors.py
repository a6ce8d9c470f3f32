"""
Jerarquía de errores del laboratorio

Cada error lleva un mensaje legible (`detail`) y el código de salida que la
CLI devuelve cuando el error llega hasta ella.
"""


class LabError(Exception):
    """Error base del laboratorio"""

    exit_code: int = 2

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ConfigError(LabError, ValueError):
    """Parámetros de experimento inválidos"""


class WidthError(LabError, ValueError):
    """Valor que no cabe en el ancho de registro o tabla declarado"""


class RegisterError(LabError, KeyError):
    """Registro inexistente, duplicado o con ancho inválido"""

    def __str__(self) -> str:
        return self.detail


class QubitBudgetError(LabError, ValueError):
    """El layout excede el límite de qubits del simulador"""


class NotAProjectorError(LabError, ValueError):
    """Operador denso que no cumple M² = M = M†"""


class SimulatorError(LabError, RuntimeError):
    """Estado numéricamente degenerado (no debería ocurrir con estados normalizados)"""

    exit_code = 1


class TranscriptError(LabError, ValueError):
    """Transcripción con entradas o salidas repetidas"""


class ReprogramSetError(LabError, ValueError):
    """Conjunto de reprogramación con una entrada repetida"""


class BudgetExceededError(LabError, RuntimeError):
    """El distinguidor superó su presupuesto declarado de consultas"""


class RedundantQueryError(LabError, RuntimeError):
    """Consulta clásica cuya respuesta ya es conocida por el distinguidor"""


class ForbiddenQueryError(LabError, RuntimeError):
    """Consulta no permitida en el juego o fase actual"""


class ProtocolError(LabError, RuntimeError):
    """El distinguidor violó el protocolo de acciones del juego"""


class HybridRangeError(LabError, ValueError):
    """Índice de híbrido fuera del rango permitido"""


class UnknownFormulaError(LabError, KeyError):
    """Identificador de cota desconocido"""

    def __str__(self) -> str:
        return self.detail


class BoundParameterError(LabError, ValueError):
    """Parámetro negativo o ausente en una fórmula de cota"""


class VacuousPredicateError(LabError, ValueError):
    """Predicado de Grover sin elementos marcados"""


class DegenerateDeltaError(LabError, ValueError):
    """Desplazamiento δ = 0 en el ataque de garras"""
