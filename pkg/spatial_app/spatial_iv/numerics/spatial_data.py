import numpy as np
from scipy.spatial.distance import pdist, squareform

from spatial_iv.exceptions import KTooLarge
from spatial_iv.model.data.spatial_dataset import SpatialDataset
from spatial_iv.model.data.spatial_graph import SpatialGraph
from spatial_iv.model.data.sym_matrix import SymMatrix

DEFAULT_KNN_K = 6


def distance_matrix(d: SpatialDataset) -> SymMatrix:
    return SymMatrix(squareform(pdist(d.coords, metric='euclidean')))


def knn_graph(d: SpatialDataset, k: int = DEFAULT_KNN_K) -> SpatialGraph:
    """Symmetrized k-nearest-neighbour graph.

    Node i is joined to j when either lists the other among its k nearest
    neighbours. Distance ties go to the lower record index.
    """
    if k < 1 or k >= d.n:
        raise KTooLarge(k, d.n)

    distances = np.array(distance_matrix(d).entries)
    np.fill_diagonal(distances, np.inf)

    edges = set()
    for i in range(d.n):
        nearest = np.argsort(distances[i], kind='stable')[:k]
        for j in nearest:
            edges.add((min(i, int(j)), max(i, int(j))))

    return SpatialGraph.from_edges(d.n, edges)


def graph_laplacian(g: SpatialGraph) -> SymMatrix:
    w = g.adjacency()
    return SymMatrix(np.diag(w.sum(axis=1)) - w)
