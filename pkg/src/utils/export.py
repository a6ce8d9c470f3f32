"""
Exportación de resultados y volcados hexadecimales
"""
import sys
from pathlib import Path
from typing import Iterable, List, Optional, TextIO

import numpy as np
import pandas as pd

from .errors import WidthError


def rows_to_frame(rows: Iterable, columns: List[str]) -> pd.DataFrame:
    """DataFrame con las filas (modelos pydantic) en el orden de columnas dado"""
    records = [row.model_dump() for row in rows]
    frame = pd.DataFrame(records, columns=columns)
    for column in frame.columns:
        if frame[column].dtype == bool:
            frame[column] = frame[column].map({True: "true", False: "false"})
    return frame


def write_csv(rows: Iterable, columns: List[str], out: Optional[Path] = None) -> None:
    """
    Escribe filas de resultados como CSV determinista.

    Cabecera incluida, separador coma, punto decimal y fin de línea LF.
    Sin `out` se escribe en la salida estándar.
    """
    frame = rows_to_frame(rows, columns)
    if out is None:
        frame.to_csv(sys.stdout, index=False, lineterminator="\n")
        return
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as handle:
        frame.to_csv(handle, index=False, lineterminator="\n")


# ============================================================================
# VOLCADOS HEXADECIMALES
# ============================================================================

def dump_hex_table(table: np.ndarray, stream: Optional[TextIO] = None) -> str:
    """Una entrada por línea en hexadecimal minúscula, terminada en salto de línea"""
    text = "".join(f"{int(value):x}\n" for value in table)
    if stream is not None:
        stream.write(text)
    return text


def parse_hex_table(text: str, n: int) -> np.ndarray:
    """
    Lee un volcado producido por `dump_hex_table`.

    Raises:
        WidthError: Número de líneas distinto de 2^n o valor fuera de rango
    """
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if len(lines) != 1 << n:
        raise WidthError(f"Se esperaban {1 << n} entradas y hay {len(lines)}")
    table = np.fromiter((int(line, 16) for line in lines), dtype=np.int64, count=len(lines))
    if table.size and (table.min() < 0 or table.max() >= 1 << n):
        raise WidthError(f"Entrada fuera de rango para n={n}")
    return table
