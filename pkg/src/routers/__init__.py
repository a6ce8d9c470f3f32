"""
Routers de la CLI
"""
from .experiments import router as experiments_router
from .selftest import router as selftest_router

__all__ = ["experiments_router", "selftest_router"]
