import sys
from datetime import datetime

from loguru import logger

from spatial_iv.app import app_config, injector


def configure_logging():
    logger.remove()
    logger.add(sys.stderr, level=app_config.log_level())


def main(argv=None) -> int:
    configure_logging()

    start = datetime.now()
    exit_code = injector.command_handler().handle(argv)
    duration = datetime.now() - start
    logger.debug(f"command duration: {duration.total_seconds()}")
    return exit_code


if __name__ == '__main__':
    sys.exit(main())
