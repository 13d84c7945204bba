from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional


class AdjustmentSet(str, Enum):
    NONE = 'none'
    SPATIAL_COORDS = 'coords'
    A_C = 'a_c'
    A_C_SPATIAL_COORDS = 'a_c+coords'

    @property
    def uses_a_c(self) -> bool:
        return self in (AdjustmentSet.A_C, AdjustmentSet.A_C_SPATIAL_COORDS)

    @property
    def uses_coords(self) -> bool:
        return self in (AdjustmentSet.SPATIAL_COORDS,
                        AdjustmentSet.A_C_SPATIAL_COORDS)


class BasisFamily(str, Enum):
    TPS = 'tps'
    LAPLACIAN = 'laplacian'


@dataclass(frozen=True)
class Method:
    name: str
    adjust: AdjustmentSet
    family: Optional[BasisFamily] = None
    # None defers to the run configuration
    use_covariates: Optional[bool] = None
    sees_withheld: bool = False


BASELINE = 'baseline'
ORACLE = 'oracle'
SPATIAL_COORDS = 'spatialcoord'
IV_TPS = 'iv_tps'
IV_GRAPH_LAPLACIAN = 'iv_graph_laplacian'
IV_TPS_SPATIAL_COORDS = 'iv_tps_spatialcoord'
IV_GRAPH_LAPLACIAN_SPATIAL_COORDS = 'iv_graph_laplacian_spatialcoord'

METHODS: Dict[str, Method] = {
    method.name: method for method in [
        Method(BASELINE, AdjustmentSet.NONE),
        Method(ORACLE, AdjustmentSet.NONE, use_covariates=True,
               sees_withheld=True),
        Method(SPATIAL_COORDS, AdjustmentSet.SPATIAL_COORDS),
        Method(IV_TPS, AdjustmentSet.A_C, BasisFamily.TPS),
        Method(IV_GRAPH_LAPLACIAN, AdjustmentSet.A_C, BasisFamily.LAPLACIAN),
        Method(IV_TPS_SPATIAL_COORDS, AdjustmentSet.A_C_SPATIAL_COORDS,
               BasisFamily.TPS),
        Method(IV_GRAPH_LAPLACIAN_SPATIAL_COORDS,
               AdjustmentSet.A_C_SPATIAL_COORDS, BasisFamily.LAPLACIAN),
    ]
}

BENCHMARK_METHODS = [BASELINE, SPATIAL_COORDS, IV_TPS, IV_GRAPH_LAPLACIAN,
                     IV_TPS_SPATIAL_COORDS, IV_GRAPH_LAPLACIAN_SPATIAL_COORDS]
