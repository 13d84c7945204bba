from abc import ABC
from typing import Dict

from spatial_iv.model.command import Command
from spatial_iv.model.command_result import CommandResult
from spatial_iv.model.run_config import SCHEMA_VERSION


class Route(ABC):
    def call(self, command: Command) -> CommandResult:
        raise NotImplementedError()

    def matches(self, command: Command) -> bool:
        raise NotImplementedError()


def output_metadata(command: Command) -> Dict[str, str]:
    """Metadata header carried by every table a command writes."""
    scenario = command.config.scenario
    return {
        'command': command.command_name,
        'schema_version': str(SCHEMA_VERSION),
        'seed': str(scenario.seed),
        'rng': scenario.metadata()['rng'],
    }
