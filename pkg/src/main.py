"""
QEMLAB - Laboratorio de criptoanálisis cuántico de Even-Mansour
CLI de experimentos por lotes

Uso:
    python -m src.main attack --name simon-q2 --n 8 --trials 100 --seed 42 --out a.csv
    python -m src.main lemma --name resample-perm --n 8 --q 1,2,4,8 --trials 10000
    python -m src.main hybrid --n 3 --j 1 --primed --trials 100000
    python -m src.main sweep --n 10 --variant forward-only --q-e 4,8 --q-p 16,32
    python -m src.main selftest --quick
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from .config import settings
from .routers import experiments_router, selftest_router
from .schemas.experiments import RESULT_COLUMNS, ExperimentConfig, ExperimentKind, Variant
from .utils.errors import LabError
from .utils.export import write_csv
from .utils.parallel import resolve_threads
from .utils.routing import CommandRouter

logger = logging.getLogger("qemlab")

# Router raíz con todos los comandos
app = CommandRouter()
app.include_router(experiments_router)
app.include_router(selftest_router)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qemlab", description=settings.APP_NAME)
    parser.add_argument("experiment", choices=[kind.value for kind in ExperimentKind])
    parser.add_argument("--name", default=None, help="Ataque, lema o barrido concreto")
    parser.add_argument("--n", type=int, default=8, help="Ancho de bloque en bits")
    parser.add_argument("--m", type=int, default=None, help="Ancho de entrada de la función (por defecto n)")
    parser.add_argument("--variant", choices=[v.value for v in Variant], default=Variant.TWO_KEY.value)
    parser.add_argument("--q", default="", help="Consultas de los juegos de remuestreo (lista con comas)")
    parser.add_argument("--q-e", "--q_e", dest="q_e", default="", help="Consultas clásicas (lista con comas)")
    parser.add_argument("--q-p", "--q_p", dest="q_p", default="", help="Consultas cuánticas (lista con comas)")
    parser.add_argument("--j", type=int, default=0, help="Índice de híbrido")
    parser.add_argument("--primed", action="store_true", help="Variante primada H'_j / Expt'_j")
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0, help="Semilla maestra de 64 bits")
    parser.add_argument("--out", default=None, help="CSV de salida (por defecto salida estándar)")
    parser.add_argument("--threads", type=int, default=settings.DEFAULT_THREADS, help="0 = núcleos lógicos")
    parser.add_argument("--quick", action="store_true", help="Autoprueba con menos ensayos")
    return parser


def configure_logging() -> None:
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def parse_config(argv: Optional[List[str]] = None) -> ExperimentConfig:
    """
    Raises:
        LabError: Argumentos inválidos (código 2)
    """
    args = build_parser().parse_args(argv)
    try:
        return ExperimentConfig(**vars(args))
    except (ValidationError, ValueError) as exc:
        raise LabError(f"Configuración inválida: {exc}") from None


def main(argv: Optional[List[str]] = None) -> int:
    """Punto de entrada; devuelve el código de salida (0, 1 o 2)"""
    configure_logging()
    try:
        config = parse_config(argv)
        logger.info(
            "📊 %s v%s | límite %d qubits | %d procesos",
            settings.APP_NAME,
            settings.APP_VERSION,
            settings.MAX_QUBITS,
            resolve_threads(config.threads),
        )
        result = app.dispatch(config)
    except LabError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.exit_code

    if config.experiment is not ExperimentKind.SELFTEST:
        write_csv(result.rows, RESULT_COLUMNS, config.out)
        logger.info("✅ %s: %d filas", config.experiment.value, len(result.rows))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
