from pathlib import Path
from typing import Optional

from spatial_iv.model.run_config import RunConfig

COMMANDS = ['simulate', 'decompose', 'estimate', 'benchmark', 'sensitivity',
            'erc']


class Command:
    def __init__(
        self,
        command_name: str,
        config: RunConfig,
        out_dir: Path,
        config_path: Optional[Path] = None,
    ):
        self.command_name = command_name
        self.config = config
        self.out_dir = Path(out_dir)
        self.config_path = config_path

    def __repr__(self):
        return f"<Command command_name={self.command_name} " \
               f"out_dir={self.out_dir} config_path={self.config_path}>"
