import json
from abc import ABC
from pathlib import Path
from typing import Optional

from loguru import logger
from pydantic import ValidationError

from spatial_iv.exceptions import ConfigError
from spatial_iv.model.run_config import RunConfig


def _describe(error: ValidationError) -> str:
    return '; '.join(
        f"{'.'.join(str(part) for part in e['loc']) or '<root>'}: {e['msg']}"
        for e in error.errors()
    )


def parse_config(text: str, source: str = '<string>') -> RunConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{source}: not valid JSON ({e})") from e

    try:
        return RunConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"{source}: {_describe(e)}") from e


class ConfigRepository(ABC):
    def load(self, path: Optional[Path]) -> RunConfig:
        raise NotImplementedError()


class ConfigRepositoryImpl(ConfigRepository):
    def load(self, path: Optional[Path]) -> RunConfig:
        if path is None:
            logger.debug("no config file given, using defaults")
            return RunConfig()

        path = Path(path)
        try:
            text = path.read_text(encoding='utf-8')
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e

        config = parse_config(text, str(path))
        logger.debug(f"loaded config {path}")
        return config
