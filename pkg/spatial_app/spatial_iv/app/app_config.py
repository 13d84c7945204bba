import os
import typing

DEFAULT_OUTPUT_DIR = 'spatial_iv_out'


def log_level() -> str:
    return os.getenv('SPATIAL_IV_LOG_LEVEL', 'INFO')


def threads() -> typing.Optional[int]:
    value = os.getenv('SPATIAL_IV_THREADS', None)
    return int(value) if value else None


def output_dir() -> str:
    return os.getenv('SPATIAL_IV_OUTPUT_DIR', DEFAULT_OUTPUT_DIR)
