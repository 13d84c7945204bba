import io
from abc import ABC
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional

import numpy as np
import pandas as pd
from loguru import logger

from spatial_iv.exceptions import DataError, EmptyAfterFiltering, \
    InvalidDataset, InvalidEdgeList, MissingColumn, NonNumericValue
from spatial_iv.model.data.csv_schema import CsvSchema
from spatial_iv.model.data.sim_draw import SpatialLayout
from spatial_iv.model.data.spatial_dataset import DEFAULT_DISTANCE_UNIT, \
    SpatialDataset
from spatial_iv.model.data.spatial_graph import SpatialGraph
from spatial_iv.repositories.files import atomic_write_text, \
    metadata_header, read_metadata_header


@dataclass(frozen=True)
class LoadResult:
    dataset: SpatialDataset
    dropped_rows: int


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise DataError(f"cannot read {path}: {e}") from e


def _coerce_numeric(frame: pd.DataFrame, column: str, path) -> pd.Series:
    raw = frame[column]
    values = pd.to_numeric(raw, errors='coerce')
    bad = values.isna() & raw.notna() & (raw.astype(str).str.strip() != '')
    bad &= ~raw.astype(str).str.strip().str.lower().isin(
        ['nan', 'na', 'null', 'none']
    )
    if bad.any():
        position = int(np.flatnonzero(bad.to_numpy())[0])
        raise NonNumericValue(
            column=column,
            row=position + 1,
            value=raw.iloc[position],
            path=path,
        )
    return values.astype(float)


def _dataset_from_frame(
    frame: pd.DataFrame,
    schema: CsvSchema,
    path,
    metadata: Dict[str, str],
) -> LoadResult:
    for column in schema.mapped_columns():
        if column not in frame.columns:
            raise MissingColumn(column, path)

    numeric = pd.DataFrame(
        {
            column: _coerce_numeric(frame, column, path)
            for column in schema.numeric_columns()
        }
    )
    keep = np.isfinite(numeric.to_numpy()).all(axis=1)
    for optional in (schema.region, schema.id):
        if optional is not None:
            labels = frame[optional]
            keep &= (labels.notna() & (labels.astype(str).str.strip() != '')) \
                .to_numpy()

    dropped = int((~keep).sum())
    if dropped:
        logger.warning(f"dropped {dropped} rows with missing fields ({path})")

    if keep.sum() == 0:
        raise EmptyAfterFiltering(f"no complete rows left in {path}")

    retained = numeric[keep]
    if schema.id is not None:
        ids = tuple(frame[schema.id][keep].astype(str).str.strip())
    else:
        ids = tuple(str(i + 1) for i in np.flatnonzero(keep))

    region = None
    if schema.region is not None:
        region = frame[schema.region][keep].astype(str).str.strip().to_numpy()

    distance_unit = schema.distance_unit or metadata.get(
        'distance_unit', DEFAULT_DISTANCE_UNIT
    )

    try:
        dataset = SpatialDataset(
            coords=retained[[schema.x, schema.y]].to_numpy(),
            exposure=retained[schema.exposure].to_numpy(),
            outcome=None if schema.outcome is None
            else retained[schema.outcome].to_numpy(),
            covariates=retained[list(schema.covariates)].to_numpy()
            .reshape(len(retained), len(schema.covariates)),
            covariate_names=tuple(schema.covariates),
            region=region,
            ids=ids,
            distance_unit=distance_unit,
            metadata={**metadata, 'source': str(path)},
        )
    except InvalidDataset as e:
        raise InvalidDataset(f"{path}: {e}") from e

    return LoadResult(dataset=dataset, dropped_rows=dropped)


def dataset_frame(dataset: SpatialDataset) -> pd.DataFrame:
    columns = {
        'id': list(dataset.ids),
        'x': dataset.coords[:, 0],
        'y': dataset.coords[:, 1],
        'a': dataset.exposure,
    }
    if dataset.outcome is not None:
        columns['outcome'] = dataset.outcome
    for j, name in enumerate(dataset.covariate_names):
        columns[name] = dataset.covariates[:, j]
    if dataset.region is not None:
        columns['region'] = list(dataset.region)
    return pd.DataFrame(columns)


def dataset_schema(dataset: SpatialDataset) -> CsvSchema:
    """The schema under which `dataset_frame` output loads back."""
    return CsvSchema(
        x='x',
        y='y',
        exposure='a',
        outcome='outcome' if dataset.outcome is not None else None,
        covariates=list(dataset.covariate_names),
        region='region' if dataset.region is not None else None,
        id='id',
    )


class DatasetRepository(ABC):
    def load_csv(self, path, schema: CsvSchema) -> LoadResult:
        raise NotImplementedError()

    def save_csv(
        self,
        dataset: SpatialDataset,
        path,
        metadata: Optional[Dict[str, str]] = None,
    ):
        raise NotImplementedError()

    def load_edge_list(self, path, dataset: SpatialDataset) -> SpatialGraph:
        raise NotImplementedError()

    def load_layout(self, path, region: Optional[str] = None) -> SpatialLayout:
        raise NotImplementedError()


class DatasetRepositoryImpl(DatasetRepository):
    def load_csv(self, path, schema: CsvSchema) -> LoadResult:
        path = Path(path)
        logger.debug(f"loading dataset {path} with schema {schema}")

        text = _read_text(path)
        frame = pd.read_csv(
            io.StringIO(text),
            comment='#',
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
        )
        frame.columns = [c.strip() for c in frame.columns]
        frame = frame.replace({'': None})

        result = _dataset_from_frame(
            frame, schema, path, read_metadata_header(text)
        )
        logger.info(
            f"loaded {result.dataset.n} units from {path} "
            f"(dropped={result.dropped_rows})"
        )
        return result

    def save_csv(
        self,
        dataset: SpatialDataset,
        path,
        metadata: Optional[Dict[str, str]] = None,
    ):
        metadata = {'distance_unit': dataset.distance_unit, **(metadata or {})}
        body = dataset_frame(dataset).to_csv(index=False, lineterminator='\n')
        atomic_write_text(Path(path), metadata_header(metadata) + body)

    def load_edge_list(self, path, dataset: SpatialDataset) -> SpatialGraph:
        frame = pd.read_csv(io.StringIO(_read_text(path)), comment='#',
                            header=None, dtype=str)
        if frame.shape[1] < 2:
            raise InvalidEdgeList(f"{path}: expected two id columns")

        index = {record_id: i for i, record_id in enumerate(dataset.ids)}
        edges = []
        for row, (left, right) in enumerate(
            zip(frame[0].str.strip(), frame[1].str.strip())
        ):
            if row == 0 and (left not in index or right not in index) \
                    and not left.lstrip('-').isdigit():
                # header row
                continue
            if left not in index or right not in index:
                raise InvalidEdgeList(
                    f"{path}: row {row + 1} references unknown id "
                    f"({left}, {right})"
                )
            edges.append((index[left], index[right]))

        return SpatialGraph.from_edges(dataset.n, edges)

    def load_layout(self, path, region: Optional[str] = None) -> SpatialLayout:
        """Coordinates (columns x, y) and optional region labels used as a
        fixed simulation layout."""
        schema = CsvSchema(region=region)
        frame = pd.read_csv(io.StringIO(_read_text(path)), comment='#',
                            dtype=str, keep_default_na=False,
                            skipinitialspace=True)
        frame.columns = [c.strip() for c in frame.columns]
        for column in [schema.x, schema.y] + ([region] if region else []):
            if column not in frame.columns:
                raise MissingColumn(column, path)

        coords = np.column_stack([
            _coerce_numeric(frame, schema.x, path),
            _coerce_numeric(frame, schema.y, path),
        ])
        if not np.all(np.isfinite(coords)):
            raise InvalidDataset(f"{path}: layout coordinates must be finite")

        labels = None
        if region:
            labels = frame[region].astype(str).str.strip().to_numpy()
        logger.info(f"loaded layout of {coords.shape[0]} points from {path}")
        return SpatialLayout(coords=coords, region=labels)
