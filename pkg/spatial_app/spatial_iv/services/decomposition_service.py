import threading
from typing import Dict, Optional, Tuple

import numpy as np
from loguru import logger

from spatial_iv.exceptions import ConfigError
from spatial_iv.model.data.spatial_basis import BasisKind, \
    ExposureDecomposition, SpatialBasis
from spatial_iv.model.data.spatial_dataset import SpatialDataset
from spatial_iv.model.data.spatial_graph import SpatialGraph
from spatial_iv.model.data.sym_matrix import EigenDecomposition
from spatial_iv.model.method import BasisFamily, Method
from spatial_iv.model.run_config import DecompositionConfig, \
    DecompositionKind
from spatial_iv.numerics import basis
from spatial_iv.numerics.numkernel import sym_eigen
from spatial_iv.numerics.spatial_data import DEFAULT_KNN_K, \
    graph_laplacian, knn_graph

DEFAULT_DIMENSION_SHARE = 0.07
MAX_CANDIDATES = 60


def default_dimension(n: int, family: BasisFamily = BasisFamily.TPS) -> int:
    """floor(0.07 n), kept inside the valid range of the basis family."""
    m = int(np.floor(DEFAULT_DIMENSION_SHARE * n))
    lower = basis.MIN_TPS_DF if family == BasisFamily.TPS else 1
    return int(min(max(m, lower), n))


def default_candidates(n: int, kind: DecompositionKind):
    lower = basis.MIN_TPS_DF if kind == DecompositionKind.TPS else 1
    return list(range(lower, min(n, MAX_CANDIDATES) + 1))


class DecompositionService:
    """Builds bases and decompositions, caching the expensive parts per
    coordinate set so replicates on a fixed layout share them."""

    def __init__(self):
        self._lock = threading.Lock()
        self._eigen: Dict[Tuple, EigenDecomposition] = {}
        self._tps: Dict[Tuple, SpatialBasis] = {}

    @staticmethod
    def _key(d: SpatialDataset, *parts) -> Tuple:
        return (d.coords.tobytes(),) + parts

    def laplacian_eigen(
        self,
        d: SpatialDataset,
        graph: Optional[SpatialGraph] = None,
        k: int = DEFAULT_KNN_K,
    ) -> EigenDecomposition:
        key = self._key(d, 'knn', k) if graph is None \
            else self._key(d, 'graph', tuple(sorted(graph.edges)))
        with self._lock:
            cached = self._eigen.get(key)
        if cached is not None:
            return cached

        graph = graph or knn_graph(d, k)
        if not graph.is_connected:
            logger.warning("adjacency graph is disconnected; the Laplacian "
                           "has one zero eigenvalue per component")
        eigen = sym_eigen(graph_laplacian(graph))
        with self._lock:
            self._eigen[key] = eigen
        return eigen

    def tps(self, d: SpatialDataset, df: int) -> SpatialBasis:
        key = self._key(d, df)
        with self._lock:
            cached = self._tps.get(key)
        if cached is None:
            cached = basis.tps_basis(d, df)
            with self._lock:
                self._tps[key] = cached
        return cached

    def family_basis(
        self,
        d: SpatialDataset,
        family: BasisFamily,
        dimension: int,
        graph: Optional[SpatialGraph] = None,
        k: int = DEFAULT_KNN_K,
    ) -> SpatialBasis:
        if family == BasisFamily.TPS:
            return self.tps(d, dimension)
        return basis.basis_from_eigen(
            self.laplacian_eigen(d, graph, k), dimension
        )

    def for_method(
        self,
        d: SpatialDataset,
        method: Method,
        dimension: Optional[int] = None,
        graph: Optional[SpatialGraph] = None,
        k: int = DEFAULT_KNN_K,
    ) -> Optional[ExposureDecomposition]:
        if method.family is None:
            return None
        m = dimension or default_dimension(d.n, method.family)
        return basis.decompose(
            d.exposure, self.family_basis(d, method.family, m, graph, k)
        )

    def decompose(
        self,
        d: SpatialDataset,
        config: DecompositionConfig,
        graph: Optional[SpatialGraph] = None,
    ) -> Tuple[ExposureDecomposition, Optional[int]]:
        """Decomposition for the configured kind. Returns it with the basis
        dimension used (None for kriging and region bases)."""
        kind = config.kind
        if kind == DecompositionKind.KRIGING:
            return basis.kriging_decompose(
                d, config.kriging_theta, config.kriging_nugget,
                config.kriging_scaled_argument,
            ), None
        if kind == DecompositionKind.REGION:
            return basis.decompose(d.exposure, basis.region_basis(d)), None

        build = self._builder(d, config, graph)
        if config.variance_target is not None:
            candidates = config.candidates or default_candidates(d.n, kind)
            m, decomposition = basis.select_dimension(
                d.exposure, candidates, config.variance_target, build
            )
            return decomposition, m

        family = BasisFamily.TPS if kind == DecompositionKind.TPS \
            else BasisFamily.LAPLACIAN
        m = config.dimension or default_dimension(d.n, family)
        return basis.decompose(d.exposure, build(m)), m

    def _builder(
        self,
        d: SpatialDataset,
        config: DecompositionConfig,
        graph: Optional[SpatialGraph],
    ):
        kind = config.kind
        if kind == DecompositionKind.TPS:
            if config.which != basis.SMOOTHEST:
                raise ConfigError("thin plate spline bases have no "
                                  "'roughest' selection")
            return lambda m: self.tps(d, m)

        eigen_kind = BasisKind.LAPLACIAN_EIGEN \
            if kind == DecompositionKind.LAPLACIAN \
            else BasisKind.PRECISION_EIGEN

        def build(m: int) -> SpatialBasis:
            eigen = self.laplacian_eigen(d, graph, config.knn_k)
            return basis.basis_from_eigen(eigen, m, config.which, eigen_kind)

        return build
