"""
Tests de la CLI: despacho de comandos, validación, CSV y códigos de salida
"""
import io

import pandas as pd
import pytest

from src.main import app, main, parse_config
from src.routers import selftest as selftest_module
from src.routers.experiments import attack_parameters, claw_scaling_slope
from src.routers.selftest import CriterionResult, SuiteOptions, cmd_selftest, run_suite
from src.schemas.experiments import (
    RESULT_COLUMNS,
    CommandResult,
    ExperimentConfig,
    ExperimentKind,
    ResultRow,
)
from src.utils.errors import ConfigError, LabError
from src.utils.routing import CommandRouter


def _run(argv, capsys):
    """Ejecuta la CLI y devuelve (código, DataFrame leído de la salida estándar)"""
    code = main(argv + ["--threads", "1"])
    out = capsys.readouterr().out
    frame = pd.read_csv(io.StringIO(out)) if out.strip() else None
    return code, frame


# ============================================================================
# TESTS DE CONFIGURACIÓN
# ============================================================================

def test_parse_comma_lists():
    """Test de listas separadas por comas"""
    config = parse_config(["sweep", "--q-e", "4,8", "--q-p", "12, 24", "--q", "1"])
    assert config.q_e == [4, 8]
    assert config.q_p == [12, 24]
    assert config.q == [1]
    assert config.experiment is ExperimentKind.SWEEP


def test_parse_invalid_list():
    """Test de lista con valores no enteros"""
    with pytest.raises(LabError) as exc_info:
        parse_config(["lemma", "--q", "a,b"])
    assert exc_info.value.exit_code == 2


def test_unknown_experiment_exits_with_two():
    """Test de experimento desconocido: argparse sale con código 2"""
    with pytest.raises(SystemExit) as exc_info:
        main(["teleport"])
    assert exc_info.value.code == 2


def test_attack_parameters_defaults():
    """Test de parámetros por defecto de cada ataque"""
    config = ExperimentConfig(experiment="attack", n=12)
    assert attack_parameters("simon-q2", config) == [(36,)]
    assert attack_parameters("q1-claw", config) == [(16,)]
    assert attack_parameters("birthday", config) == [(64, 64)]
    grid = ExperimentConfig(experiment="attack", n=8, q_e=[8, 16], q_p=[32])
    assert attack_parameters("birthday", grid) == [(4, 16), (8, 16)]


# ============================================================================
# TESTS DE CÓDIGOS DE SALIDA
# ============================================================================

@pytest.mark.parametrize(
    "argv",
    [
        ["lemma", "--n", "0"],
        ["lemma", "--name", "no-such-lemma", "--n", "4"],
        ["attack", "--name", "no-such-attack"],
        ["attack", "--name", "simon-q2", "--n", "13"],
        ["attack", "--variant", "forward-only", "--n", "6"],
        ["hybrid", "--n", "3", "--j", "3"],
        ["hybrid", "--n", "3", "--j", "2", "--primed"],
        ["sweep", "--n", "6"],
        ["sweep", "--name", "no-such-sweep", "--q-e", "4", "--q-p", "8"],
        ["lemma", "--seed", "-1"],
        ["lemma", "--trials", "0"],
    ],
)
def test_configuration_errors_exit_with_two(argv, capsys):
    """Test de errores de configuración: código 2 y mensaje en stderr"""
    code = main(argv + ["--threads", "1"])
    captured = capsys.readouterr()
    assert code == 2
    assert captured.out == ""
    assert "error:" in captured.err


# ============================================================================
# TESTS DE COMANDOS
# ============================================================================

def test_lemma_csv_to_stdout(capsys):
    """Test de CSV en la salida estándar con las columnas en orden"""
    code, frame = _run(["lemma", "--name", "resample-perm", "--n", "5", "--q", "1,4", "--trials", "200"], capsys)
    assert code == 0
    assert list(frame.columns) == RESULT_COLUMNS
    assert frame["q_p"].tolist() == [1, 4]
    assert (frame["experiment"] == "lemma").all()
    assert (frame["advantage"] <= 1.0).all()


def test_csv_file_output(tmp_path):
    """Test de escritura a archivo: cabecera y fin de línea LF"""
    out = tmp_path / "nested" / "lemma.csv"
    code = main(["lemma", "--name", "resample-fn", "--n", "5", "--q", "2", "--trials", "150",
                 "--out", str(out), "--threads", "1"])
    assert code == 0
    text = out.read_bytes().decode("utf-8")
    assert text.splitlines()[0] == ",".join(RESULT_COLUMNS)
    assert "\r\n" not in text
    assert text.count("\n") == 2
    assert text.splitlines()[1].split(",")[-1] in ("true", "false")


def test_same_seed_gives_same_rows(capsys):
    """Test de determinismo: misma semilla, mismas filas salvo el tiempo"""
    argv = ["lemma", "--name", "reprogram", "--n", "4", "--trials", "150", "--seed", "12"]
    _, first = _run(argv, capsys)
    _, second = _run(argv, capsys)
    pd.testing.assert_frame_equal(first.drop(columns="wall_time_ms"), second.drop(columns="wall_time_ms"))
    assert first["name"].tolist() == ["reprogram:fixed-point", "reprogram:geometric"]


def test_attack_simon(capsys):
    """Test del ataque de Simon por la CLI"""
    code, frame = _run(["attack", "--name", "simon-q2", "--n", "6", "--trials", "20", "--seed", "5"], capsys)
    assert code == 0
    row = frame.iloc[0]
    assert row["p_world1"] >= 0.7
    assert row["p_world0"] <= 0.1
    assert row["bound"] == 1.0


def test_attack_claw_grid(capsys):
    """Test del ataque de garras con una fila por q_E"""
    code, frame = _run(["attack", "--name", "q1-claw", "--n", "8", "--q-e", "4,8", "--trials", "10"], capsys)
    assert code == 0
    assert len(frame) == 2
    assert frame["q_e"].tolist()[0] <= 6
    assert frame["q_e"].tolist()[1] <= 10


def test_hybrid_rows(capsys):
    """Test de las filas del comando hybrid con j = 0"""
    code, frame = _run(["hybrid", "--n", "3", "--j", "0", "--trials", "1000", "--seed", "2"], capsys)
    assert code == 0
    names = frame["name"].tolist()
    assert names == ["tv:H_0~real", "bad1", "bad2", "bad3", "identical:Expt_0~Expt'_0", "gap:H_0~H'_0"]
    identical = frame[frame["name"].str.startswith("identical:")].iloc[0]
    assert identical["advantage"] == 0.0
    assert (frame["q_e"] == 2).all()


def test_hybrid_primed_rows(capsys):
    """Test de las filas del comando hybrid con --primed"""
    code, frame = _run(["hybrid", "--n", "3", "--j", "1", "--primed", "--trials", "500"], capsys)
    assert code == 0
    assert frame["name"].tolist() == ["tv:Expt'_1~H'_1", "bad1", "bad2", "bad3", "gap:H'_1~H_2"]


def test_forward_only_hybrid(capsys):
    """Test del comando hybrid en la variante de solo ida"""
    code, frame = _run(["hybrid", "--n", "4", "--variant", "forward-only", "--j", "2", "--trials", "500"], capsys)
    assert code == 0
    assert frame["name"].tolist() == ["tv:H_2~ideal"]


def test_sweep_bound(capsys):
    """Test del barrido de cotas: un distinguidor por fila"""
    code, frame = _run(["sweep", "--n", "6", "--q-e", "4", "--q-p", "8", "--trials", "100"], capsys)
    assert code == 0
    assert frame["name"].tolist() == ["classical-prober", "collision-prober", "q1-claw", "birthday", "simon-q2"]

    code, frame = _run(["sweep", "--n", "6", "--variant", "forward-only", "--q-e", "4", "--q-p", "8",
                        "--trials", "100"], capsys)
    assert code == 0
    assert "simon-q2" not in frame["name"].tolist()


def test_claw_scaling_slope():
    """Test de la pendiente sobre filas sintéticas con ventaja proporcional"""
    rows = []
    for q_e, q_p in ((10, 36), (18, 52), (34, 72)):
        scale = q_p**2 * q_e / 2.0**16
        rows.append(ResultRow(experiment="sweep", name="claw-scaling", n=16, variant="two-key", q_e=q_e,
                              q_p=q_p, trials=100, p_world1=scale, p_world0=0.0, advantage=scale,
                              ci_halfwidth=0.01, bound=scale, seed=0, wall_time_ms=1.0))
    assert claw_scaling_slope(rows) == pytest.approx(1.0)


# ============================================================================
# TESTS DE ROUTING Y AUTOPRUEBA
# ============================================================================

def test_app_registers_all_commands():
    """Test de los comandos incluidos en el router raíz"""
    assert app.names == ["attack", "hybrid", "lemma", "selftest", "sweep"]


def test_router_rejects_duplicates():
    """Test de comando duplicado"""
    router = CommandRouter()

    @router.command("attack")
    def first(config):
        return CommandResult()

    with pytest.raises(ConfigError):
        router.command("attack")(first)
    other = CommandRouter()
    other.command("attack")(first)
    with pytest.raises(ConfigError):
        router.include_router(other)


def test_router_unknown_command():
    """Test de despacho sin comando registrado"""
    with pytest.raises(ConfigError):
        CommandRouter().dispatch(ExperimentConfig(experiment="lemma"))


def test_run_suite_subset():
    """Test de criterios rápidos del simulador"""
    options = SuiteOptions(quick=True, seed=0, threads=1)
    results = run_suite(options, ["simulator", "gentle-measurement"])
    assert [result.name for result in results] == ["simulator", "gentle-measurement"]
    assert all(result.passed for result in results)


def test_selftest_exit_codes(monkeypatch):
    """Test del código de salida de selftest: 0 si todo pasa, 1 si algo falla"""
    config = ExperimentConfig(experiment="selftest", quick=True, threads=1)
    monkeypatch.setattr(selftest_module, "CRITERIA", {
        "ok": lambda options: CriterionResult("ok", True, "bien"),
    })
    assert cmd_selftest(config).exit_code == 0

    monkeypatch.setattr(selftest_module, "CRITERIA", {
        "ok": lambda options: CriterionResult("ok", True, "bien"),
        "bad": lambda options: CriterionResult("bad", False, "mal"),
    })
    assert cmd_selftest(config).exit_code == 1


def test_selftest_writes_no_csv(monkeypatch, capsys):
    """Test de selftest por la CLI: sin CSV y con el código de la batería"""
    monkeypatch.setattr(selftest_module, "CRITERIA", {
        "bad": lambda options: CriterionResult("bad", False, "mal"),
    })
    assert main(["selftest", "--quick", "--threads", "1"]) == 1
    assert capsys.readouterr().out == ""
