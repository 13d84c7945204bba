from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from spatial_iv.exceptions import InvalidDataset, MissingColumn

DEFAULT_DISTANCE_UNIT = "10^6 m"


def _read_only(values, dtype=float) -> np.ndarray:
    values = np.array(values, dtype=dtype)
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class SpatialDataset:
    coords: np.ndarray
    exposure: np.ndarray
    outcome: Optional[np.ndarray] = None
    covariates: Optional[np.ndarray] = None
    covariate_names: Tuple[str, ...] = ()
    region: Optional[np.ndarray] = None
    ids: Optional[Tuple[str, ...]] = None
    distance_unit: str = DEFAULT_DISTANCE_UNIT
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        coords = _read_only(self.coords)
        exposure = _read_only(self.exposure)
        n = exposure.shape[0] if exposure.ndim == 1 else -1

        if n < 3:
            raise InvalidDataset(f"need at least 3 units, got {n}")
        if coords.shape != (n, 2):
            raise InvalidDataset(
                f"coords must have shape ({n}, 2), got {coords.shape}"
            )
        if not (np.all(np.isfinite(coords)) and np.all(np.isfinite(exposure))):
            raise InvalidDataset("coords and exposure must be finite")

        outcome = self.outcome
        if outcome is not None:
            outcome = _read_only(outcome)
            if outcome.shape != (n,) or not np.all(np.isfinite(outcome)):
                raise InvalidDataset("outcome must be a finite n-vector")

        covariates = self.covariates
        if covariates is None:
            covariates = np.empty((n, 0))
        covariates = _read_only(covariates)
        if covariates.ndim != 2 or covariates.shape[0] != n:
            raise InvalidDataset(
                f"covariates must be an n x p matrix, got {covariates.shape}"
            )
        if not np.all(np.isfinite(covariates)):
            raise InvalidDataset("covariates must be finite")

        names = tuple(self.covariate_names)
        if not names:
            names = tuple(f"x{j + 1}" for j in range(covariates.shape[1]))
        if len(names) != covariates.shape[1]:
            raise InvalidDataset(
                f"{len(names)} covariate names for "
                f"{covariates.shape[1]} columns"
            )

        region = self.region
        if region is not None:
            region = _read_only([str(r) for r in region], dtype=object)
            if region.shape != (n,):
                raise InvalidDataset("every unit needs a region label")

        ids = self.ids
        if ids is None:
            ids = tuple(str(i + 1) for i in range(n))
        ids = tuple(str(i) for i in ids)
        if len(ids) != n or len(set(ids)) != n:
            raise InvalidDataset("ids must be n unique identifiers")

        object.__setattr__(self, 'coords', coords)
        object.__setattr__(self, 'exposure', exposure)
        object.__setattr__(self, 'outcome', outcome)
        object.__setattr__(self, 'covariates', covariates)
        object.__setattr__(self, 'covariate_names', names)
        object.__setattr__(self, 'region', region)
        object.__setattr__(self, 'ids', ids)

    @property
    def n(self) -> int:
        return self.exposure.shape[0]

    @property
    def p(self) -> int:
        return self.covariates.shape[1]

    @property
    def has_outcome(self) -> bool:
        return self.outcome is not None

    def region_levels(self) -> Tuple[str, ...]:
        if self.region is None:
            return ()
        return tuple(sorted(set(self.region)))

    def with_outcome(self, outcome: np.ndarray) -> 'SpatialDataset':
        return replace(self, outcome=outcome)

    def without_covariates(self, names) -> 'SpatialDataset':
        for name in names:
            if name not in self.covariate_names:
                raise MissingColumn(name)
        keep = [j for j, name in enumerate(self.covariate_names)
                if name not in names]
        return replace(
            self,
            covariates=self.covariates[:, keep],
            covariate_names=tuple(self.covariate_names[j] for j in keep),
        )

    def subset(self, mask: np.ndarray) -> 'SpatialDataset':
        mask = np.asarray(mask, dtype=bool)
        return SpatialDataset(
            coords=self.coords[mask],
            exposure=self.exposure[mask],
            outcome=None if self.outcome is None else self.outcome[mask],
            covariates=self.covariates[mask],
            covariate_names=self.covariate_names,
            region=None if self.region is None else self.region[mask],
            ids=tuple(np.asarray(self.ids, dtype=object)[mask]),
            distance_unit=self.distance_unit,
            metadata=dict(self.metadata),
        )

    def __repr__(self):
        return f"<SpatialDataset n={self.n} p={self.p} " \
               f"outcome={self.has_outcome} " \
               f"regions={len(self.region_levels())}>"
