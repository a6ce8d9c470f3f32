"""
Tests de utilidades: flujos aleatorios, reparto de trabajo, exportación y configuración
"""
import numpy as np
import pandas as pd
import pytest

from src.config import Settings, settings
from src.schemas.experiments import RESULT_COLUMNS, ResultRow
from src.utils.errors import ConfigError, LabError, SimulatorError, WidthError
from src.utils.export import dump_hex_table, parse_hex_table, rows_to_frame, write_csv
from src.utils.parallel import chunk_ranges, resolve_threads, run_parallel
from src.utils.rng import derive_rng


def _square(value):
    return value * value


def _row(**overrides):
    fields = dict(experiment="lemma", name="resample-perm", n=4, variant="two-key", q_e=0, q_p=1,
                  trials=100, p_world1=0.5, p_world0=0.25, advantage=0.25, ci_halfwidth=0.1,
                  bound=1.0, seed=0, wall_time_ms=3.5)
    fields.update(overrides)
    return ResultRow(**fields)


# ============================================================================
# TESTS DE FLUJOS ALEATORIOS
# ============================================================================

def test_same_path_same_stream():
    """Test de reproducibilidad por ruta"""
    first = derive_rng(7, 0, 1, 3).integers(0, 2**32, size=8)
    second = derive_rng(7, 0, 1, 3).integers(0, 2**32, size=8)
    assert first.tolist() == second.tolist()


def test_different_paths_differ():
    """Test de independencia entre rutas y semillas"""
    base = derive_rng(7, 0, 1, 3).integers(0, 2**32, size=8).tolist()
    assert derive_rng(7, 0, 0, 3).integers(0, 2**32, size=8).tolist() != base
    assert derive_rng(8, 0, 1, 3).integers(0, 2**32, size=8).tolist() != base


def test_seed_out_of_range():
    """Test de semilla negativa o de más de 64 bits"""
    with pytest.raises(ConfigError):
        derive_rng(-1)
    with pytest.raises(ConfigError):
        derive_rng(2**64)
    with pytest.raises(ConfigError):
        derive_rng(1, -2)


# ============================================================================
# TESTS DE REPARTO
# ============================================================================

def test_chunk_ranges_cover_total():
    """Test de intervalos contiguos que cubren [0, total)"""
    ranges = chunk_ranges(10, 3)
    assert ranges == [(0, 4), (4, 7), (7, 10)]
    assert chunk_ranges(2, 8) == [(0, 1), (1, 2)]


def test_resolve_threads():
    """Test de trabajadores explícitos y automáticos"""
    assert resolve_threads(3) == 3
    assert resolve_threads(0) >= 1


def test_run_parallel_in_process_keeps_order():
    """Test de ejecución en el proceso actual"""
    assert run_parallel(_square, [3, 1, 2], threads=1) == [9, 1, 4]


@pytest.mark.slow
def test_run_parallel_with_processes_keeps_order():
    """Test de ejecución con procesos: mismo orden"""
    assert run_parallel(_square, list(range(6)), threads=2) == [0, 1, 4, 9, 16, 25]


# ============================================================================
# TESTS DE EXPORTACIÓN
# ============================================================================

def test_rows_to_frame_lowercase_booleans():
    """Test de booleanos como true/false"""
    frame = rows_to_frame([_row(), _row(vacuous=True)], RESULT_COLUMNS)
    assert list(frame.columns) == RESULT_COLUMNS
    assert frame["vacuous"].tolist() == ["false", "true"]


def test_write_csv_roundtrip(tmp_path):
    """Test de escritura y lectura con pandas"""
    out = tmp_path / "rows.csv"
    write_csv([_row(), _row(q_p=4)], RESULT_COLUMNS, out)
    frame = pd.read_csv(out)
    assert frame["q_p"].tolist() == [1, 4]
    assert b"\r\n" not in out.read_bytes()


def test_hex_dump_format():
    """Test del volcado hexadecimal"""
    assert dump_hex_table(np.array([10, 3, 15, 0])) == "a\n3\nf\n0\n"


def test_parse_hex_rejects_bad_dumps():
    """Test de volcados con longitud o valores inválidos"""
    assert parse_hex_table("a\n3\nf\n0\n", 2).tolist() == [10, 3, 15, 0]
    with pytest.raises(WidthError):
        parse_hex_table("0\n1\n", 2)
    with pytest.raises(WidthError):
        parse_hex_table("0\n1\n2\n4\n", 2)


# ============================================================================
# TESTS DE CONFIGURACIÓN Y ERRORES
# ============================================================================

def test_settings_defaults():
    """Test de valores por defecto del laboratorio"""
    assert settings.MAX_QUBITS == 28
    assert settings.TV_THRESHOLD == pytest.approx(0.02)
    assert settings.CLAW_DELTA == 1


def test_settings_from_environment(monkeypatch):
    """Test de lectura con el prefijo QEMLAB_"""
    monkeypatch.setenv("QEMLAB_MAX_QUBITS", "20")
    assert Settings().MAX_QUBITS == 20


def test_error_exit_codes():
    """Test de códigos de salida de la jerarquía de errores"""
    assert ConfigError("x").exit_code == 2
    assert isinstance(WidthError("x"), LabError)
    assert SimulatorError("x").exit_code == 1
