"""
Configuración del laboratorio QEMLAB
"""
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Configuración de la aplicación"""

    # Application Configuration
    APP_NAME: str = "QEMLAB - Quantum Even-Mansour Lab"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # Simulator Limits
    MAX_QUBITS: int = 28  # 2^28 amplitudes complejas ≈ 4 GiB
    MAX_PERMUTATION_BITS: int = 28
    MAX_DENSE_DIM: int = 64

    # Numerical Tolerances
    NORM_TOLERANCE: float = 1e-9
    STATE_TOLERANCE: float = 1e-12

    # Attack Configuration
    SIMON_MAX_N: int = 12
    GROVER_MAX_N: int = 20
    CLAW_MAX_N: int = 18
    CLAW_DELTA: int = 1
    CLAW_RETRY_CAP: int = 4
    GF2_MAX_ROWS: int = 4096

    # Game / Estimation Configuration
    CI_Z: float = 1.959963984540054  # Cuantil normal del 97.5%
    TV_THRESHOLD: float = 0.02
    EXACT_EPSILON_MAX_BITS: int = 12
    PHASE2_BUDGET: int = 0  # 0 = 2^n sondeos en la fase 2

    # CLI Configuration
    DEFAULT_THREADS: int = 0  # 0 = núcleos lógicos

    class Config:
        env_prefix = "QEMLAB_"
        env_file = ".env"
        case_sensitive = True


settings = Settings()
