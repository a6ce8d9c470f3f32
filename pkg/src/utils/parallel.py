"""
Reparto de ensayos Monte-Carlo entre procesos
"""
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, Tuple, TypeVar

from ..config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: int | None = None) -> int:
    """Número efectivo de trabajadores (0 o None = núcleos lógicos)"""
    if threads is None:
        threads = settings.DEFAULT_THREADS
    if threads <= 0:
        return os.cpu_count() or 1
    return threads


def chunk_ranges(total: int, chunks: int) -> List[Tuple[int, int]]:
    """Divide [0, total) en a lo sumo `chunks` intervalos contiguos no vacíos"""
    chunks = max(1, min(chunks, total))
    size, extra = divmod(total, chunks)
    ranges = []
    start = 0
    for index in range(chunks):
        stop = start + size + (1 if index < extra else 0)
        if stop > start:
            ranges.append((start, stop))
        start = stop
    return ranges


def run_parallel(fn: Callable[[T], R], tasks: Sequence[T], threads: int | None = None) -> List[R]:
    """
    Aplica `fn` a cada tarea preservando el orden de `tasks`.

    Con un solo trabajador todo corre en el proceso actual; si no, `fn` y las
    tareas deben ser serializables con pickle.
    """
    workers = resolve_threads(threads)
    if workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    logger.debug("Repartiendo %d tareas entre %d procesos", len(tasks), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))
