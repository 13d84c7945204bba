import json
from abc import ABC
from pathlib import Path
from typing import Dict, Optional

import pandas as pd
from loguru import logger

from spatial_iv.model.run_config import OutputFormat, RunConfig
from spatial_iv.repositories.files import atomic_write_text, metadata_header

RESOLVED_CONFIG = 'resolved_config.json'
MANIFEST = 'manifest'


def table_text(
    frame: pd.DataFrame,
    metadata: Dict[str, str],
    output_format: OutputFormat,
) -> str:
    if output_format == OutputFormat.JSON:
        rows = json.loads(frame.to_json(orient='records', double_precision=15))
        return json.dumps({'metadata': metadata, 'rows': rows}, indent=2) \
            + '\n'
    return metadata_header(metadata) + frame.to_csv(
        index=False, lineterminator='\n'
    )


class ResultsRepository(ABC):
    def save_table(
        self,
        out_dir: Path,
        name: str,
        frame: pd.DataFrame,
        metadata: Optional[Dict[str, str]] = None,
        output_format: OutputFormat = OutputFormat.CSV,
    ) -> Path:
        raise NotImplementedError()

    def save_text(self, out_dir: Path, file_name: str, text: str) -> Path:
        raise NotImplementedError()

    def save_resolved_config(self, out_dir: Path, config: RunConfig) -> Path:
        raise NotImplementedError()

    def save_manifest(
        self,
        out_dir: Path,
        entries: pd.DataFrame,
        metadata: Optional[Dict[str, str]] = None,
    ) -> Path:
        raise NotImplementedError()


class ResultsRepositoryImpl(ResultsRepository):
    def save_table(
        self,
        out_dir: Path,
        name: str,
        frame: pd.DataFrame,
        metadata: Optional[Dict[str, str]] = None,
        output_format: OutputFormat = OutputFormat.CSV,
    ) -> Path:
        metadata = {'resolved_config': RESOLVED_CONFIG, **(metadata or {})}
        path = Path(out_dir) / f"{name}.{output_format.value}"
        atomic_write_text(path, table_text(frame, metadata, output_format))
        logger.info(f"wrote {len(frame)} rows to {path}")
        return path

    def save_text(self, out_dir: Path, file_name: str, text: str) -> Path:
        path = Path(out_dir) / file_name
        atomic_write_text(path, text)
        logger.info(f"wrote {path}")
        return path

    def save_resolved_config(self, out_dir: Path, config: RunConfig) -> Path:
        return self.save_text(out_dir, RESOLVED_CONFIG, config.resolved_json())

    def save_manifest(
        self,
        out_dir: Path,
        entries: pd.DataFrame,
        metadata: Optional[Dict[str, str]] = None,
    ) -> Path:
        return self.save_table(out_dir, MANIFEST, entries, metadata)
