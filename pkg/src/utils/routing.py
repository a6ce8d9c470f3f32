"""
Registro de comandos de la CLI

Cada módulo de `routers` declara sus comandos con `@router.command(...)`,
igual que un router de endpoints; `main` los incluye en un router raíz y
despacha según el tipo de experimento.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List

from ..schemas.experiments import CommandResult, ExperimentConfig
from .errors import ConfigError

logger = logging.getLogger(__name__)

Handler = Callable[[ExperimentConfig], CommandResult]


@dataclass(frozen=True)
class Command:
    name: str
    handler: Handler
    summary: str = ""


class CommandRouter:
    """Tabla nombre → manejador"""

    def __init__(self):
        self.commands: Dict[str, Command] = {}

    def command(self, name: str, summary: str = "") -> Callable[[Handler], Handler]:
        def register(handler: Handler) -> Handler:
            if name in self.commands:
                raise ConfigError(f"Comando duplicado: '{name}'")
            self.commands[name] = Command(name, handler, summary or (handler.__doc__ or "").strip())
            return handler

        return register

    def include_router(self, other: "CommandRouter") -> None:
        for command in other.commands.values():
            if command.name in self.commands:
                raise ConfigError(f"Comando duplicado: '{command.name}'")
            self.commands[command.name] = command

    @property
    def names(self) -> List[str]:
        return sorted(self.commands)

    def dispatch(self, config: ExperimentConfig) -> CommandResult:
        """
        Raises:
            ConfigError: Experimento sin comando registrado
        """
        key = config.experiment.value
        command = self.commands.get(key)
        if command is None:
            raise ConfigError(f"Experimento desconocido: '{key}' (opciones: {', '.join(self.names)})")
        logger.debug("Despachando %s (%s)", key, config.name)
        return command.handler(config)
