import argparse
import sys
from pathlib import Path
from typing import List, Optional

from loguru import logger

from spatial_iv.app import app_config
from spatial_iv.app.router import Router
from spatial_iv.exceptions import SpatialIvError
from spatial_iv.model.command import COMMANDS, Command
from spatial_iv.model.run_config import OutputFormat
from spatial_iv.repositories.config_repository import ConfigRepository

U64_MAX = 2 ** 64 - 1


def _u64(value: str) -> int:
    seed = int(value)
    if not 0 <= seed <= U64_MAX:
        raise argparse.ArgumentTypeError(f"seed must lie in [0, {U64_MAX}]")
    return seed


def _positive(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return number


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='spatial-iv',
        description='Spatial instrumental-variable estimation of exposure '
                    'effects under unmeasured spatial confounding.',
    )
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('--config', type=Path, default=None,
                        help='run configuration (JSON)')
    parser.add_argument('--out', type=Path, default=None,
                        help='output directory')
    parser.add_argument('--seed', type=_u64, default=None)
    parser.add_argument('--threads', type=_positive, default=None)
    parser.add_argument('--format', choices=[f.value for f in OutputFormat],
                        default=None)
    parser.add_argument('--data', default=None,
                        help='dataset CSV, overrides dataset.path')
    parser.add_argument('--model', choices=['dr', 'linear'], default=None,
                        help='linear writes one linear_fits row per '
                             'configured method')
    parser.add_argument('--strategy',
                        choices=['2sls', '2sri', 'doublepred', 'spatialplus'],
                        default=None)
    return parser


class CommandHandler:
    def __init__(self, router: Router, config_repository: ConfigRepository):
        self.router = router
        self.config_repository = config_repository

    def command(self, argv: Optional[List[str]] = None) -> Command:
        args = build_parser().parse_args(argv)
        config = self.config_repository.load(args.config).with_overrides(
            seed=args.seed,
            threads=args.threads or app_config.threads(),
            output_format=OutputFormat(args.format) if args.format else None,
            data_path=args.data,
            model=args.model,
            strategy=args.strategy,
        )
        return Command(
            command_name=args.command,
            config=config,
            out_dir=args.out or Path(app_config.output_dir()),
            config_path=args.config,
        )

    def handle(self, argv: Optional[List[str]] = None) -> int:
        try:
            command = self.command(argv)
            logger.debug(f"handling {command}")
            result = self.router.route(command)
        except SpatialIvError as e:
            logger.error(f"{type(e).__name__}: {e}")
            return e.exit_code
        except Exception as e:
            logger.error(f"Failed handling command: {argv}")
            raise e

        if result.report:
            sys.stdout.write(result.report + '\n')
        logger.info(f"wrote {len(result.outputs)} files, "
                    f"exit code {result.exit_code}")
        return result.exit_code
