from pathlib import Path
from typing import List

EXIT_SUCCESS = 0
EXIT_BAND_FAILURE = 4


class CommandResult:
    exit_code: int
    outputs: List[Path]
    report: str

    def __repr__(self):
        return f"<CommandResult exit_code={self.exit_code} " \
               f"outputs={[str(p) for p in self.outputs]}>"

    @staticmethod
    def success(outputs: List[Path], report: str = ''):
        result = CommandResult()
        result.exit_code = EXIT_SUCCESS
        result.outputs = list(outputs)
        result.report = report

        return result

    @staticmethod
    def band_failure(outputs: List[Path], report: str = ''):
        result = CommandResult()
        result.exit_code = EXIT_BAND_FAILURE
        result.outputs = list(outputs)
        result.report = report

        return result
