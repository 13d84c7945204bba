from dataclasses import dataclass
from typing import FrozenSet, Iterable, Tuple

import numpy as np
import scipy.sparse
from scipy.sparse.csgraph import connected_components

from spatial_iv.exceptions import InvalidEdgeList


@dataclass(frozen=True)
class SpatialGraph:
    n: int
    edges: FrozenSet[Tuple[int, int]]
    degree: np.ndarray
    n_components: int

    @property
    def is_connected(self) -> bool:
        return self.n_components == 1

    @staticmethod
    def from_edges(n: int, edges: Iterable[Tuple[int, int]]) -> 'SpatialGraph':
        normalized = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise InvalidEdgeList(f"self-loop on node {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidEdgeList(f"edge ({i}, {j}) outside 0..{n - 1}")
            normalized.add((min(i, j), max(i, j)))

        degree = np.zeros(n, dtype=int)
        for i, j in normalized:
            degree[i] += 1
            degree[j] += 1
        degree.setflags(write=False)

        return SpatialGraph(
            n=n,
            edges=frozenset(normalized),
            degree=degree,
            n_components=_count_components(n, normalized),
        )

    def adjacency(self) -> np.ndarray:
        w = np.zeros((self.n, self.n))
        for i, j in self.edges:
            w[i, j] = 1.0
            w[j, i] = 1.0
        return w

    def __repr__(self):
        return f"<SpatialGraph n={self.n} edges={len(self.edges)} " \
               f"components={self.n_components}>"


def _count_components(n: int, edges) -> int:
    if not edges:
        return n
    rows, cols = zip(*edges)
    adjacency = scipy.sparse.coo_matrix(
        (np.ones(len(rows)), (rows, cols)), shape=(n, n)
    )
    count, _ = connected_components(adjacency, directed=False)
    return int(count)
