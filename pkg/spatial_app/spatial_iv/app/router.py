from abc import ABC

from loguru import logger

from spatial_iv.exceptions import UnknownCommandException
from spatial_iv.model.command import Command
from spatial_iv.model.command_result import CommandResult


class Router(ABC):
    def route(self, command: Command) -> CommandResult:
        pass


class RouterImpl(Router):
    def __init__(self, routes=None):
        self.routes = routes or []

    def route(self, command: Command) -> CommandResult:
        for route in self.routes:
            if route.matches(command):
                try:
                    return route.call(command)
                except Exception as e:
                    logger.error(f"Error occurred in route {route}")
                    raise e

        raise UnknownCommandException(command.command_name)
