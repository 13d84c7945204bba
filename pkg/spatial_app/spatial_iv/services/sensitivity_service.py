from typing import Optional

import pandas as pd
from loguru import logger

from spatial_iv.exceptions import ConfigError
from spatial_iv.model.data.spatial_dataset import SpatialDataset
from spatial_iv.model.data.spatial_graph import SpatialGraph
from spatial_iv.model.method import AdjustmentSet, BasisFamily
from spatial_iv.model.run_config import RunConfig
from spatial_iv.numerics.basis import decompose
from spatial_iv.numerics.dr.truncated_effect import truncated_effect
from spatial_iv.services.decomposition_service import DecompositionService

SENSITIVITY_COLUMNS = ['family', 'dimension', 'psi', 'ci_lo', 'ci_hi', 'se',
                       'confounded_variance_share']


class SensitivityService:
    """Truncated-effect estimates across basis dimensions."""

    def __init__(self, decomposition_service: DecompositionService):
        self.decomposition_service = decomposition_service

    def check_dimensions(
        self,
        d: SpatialDataset,
        config: RunConfig,
        graph: Optional[SpatialGraph] = None,
    ):
        sensitivity = config.sensitivity
        if sensitivity.family != BasisFamily.LAPLACIAN:
            return
        zeros = self.decomposition_service.laplacian_eigen(
            d, graph, config.decomposition.knn_k
        ).near_zero_count()
        rejected = [m for m in sensitivity.dimensions if m <= zeros]
        if rejected:
            raise ConfigError(
                f"Laplacian dimensions {rejected} are rejected: the graph "
                f"has {zeros} zero eigenvalue(s), so the first {zeros} "
                f"eigenvectors are constant within connected components; "
                f"start at dimension {zeros + 1}"
            )

    def run(
        self,
        d: SpatialDataset,
        config: RunConfig,
        graph: Optional[SpatialGraph] = None,
    ) -> pd.DataFrame:
        sensitivity = config.sensitivity
        self.check_dimensions(d, config, graph)
        adjust = AdjustmentSet(sensitivity.method)
        seen = d.without_covariates(config.estimation.withheld_covariates)

        rows = []
        for m in sensitivity.dimensions:
            b = self.decomposition_service.family_basis(
                d, sensitivity.family, m, graph, config.decomposition.knn_k
            )
            dec = decompose(d.exposure, b)
            result = truncated_effect(seen, adjust, dec, sensitivity.cutoff,
                                      config.estimation)
            logger.debug(f"sensitivity {sensitivity.family.value} m={m}: "
                         f"psi={result.psi:.5f}")
            rows.append({
                'family': sensitivity.family.value,
                'dimension': m,
                'psi': result.psi,
                'ci_lo': result.ci[0],
                'ci_hi': result.ci[1],
                'se': result.se,
                'confounded_variance_share': dec.confounded_variance_share,
            })
        return pd.DataFrame(rows, columns=SENSITIVITY_COLUMNS)
