"""
Flujos aleatorios reproducibles

Una semilla maestra se expande en flujos independientes por ruta
(punto, lado, ensayo) con el `spawn_key` de `SeedSequence`; el generador es
siempre PCG64, de modo que la misma semilla reproduce las mismas trayectorias
en cualquier máquina.
"""
import numpy as np

from .errors import ConfigError

MAX_SEED = 2**64 - 1


def derive_rng(seed: int, *path: int) -> np.random.Generator:
    """
    Generador PCG64 para la ruta `path` bajo la semilla maestra `seed`.

    Args:
        seed: Semilla maestra de 64 bits
        *path: Índices enteros no negativos (contador)

    Returns:
        Generador independiente de cualquier otra ruta

    Raises:
        ConfigError: Semilla o índices fuera de rango
    """
    if not 0 <= seed <= MAX_SEED:
        raise ConfigError(f"Semilla fuera de rango de 64 bits: {seed}")
    if any(p < 0 for p in path):
        raise ConfigError(f"Índices de flujo negativos: {path}")
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.PCG64(sequence))
