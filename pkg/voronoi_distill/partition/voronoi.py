from typing import Iterable

import networkx as nx
import numpy as np
from sklearn.neighbors import KDTree

from voronoi_distill.partition.delaunay import neighbour_graph
from voronoi_distill.utils.exceptions import PartitionError
from voronoi_distill.utils.utils import as_vector, setup_logger

logger = setup_logger(logger_name="voronoi_distill.partition")

# Radius slack when collecting tie candidates around the tree's nearest distance.
_TIE_TOLERANCE = 1e-9


class VoronoiPartition:
    """
    Ordered codebook whose nearest-codeword map (Manhattan metric) partitions
    the state space into cells.

    Indices are always ``0..m-1``; removing a codeword shifts every later index
    down by one. The kd-tree and the Delaunay neighbour graph are rebuilt after
    each mutation. Queries may run concurrently between mutations, never during one.
    """

    def __init__(self, dim: int, points: Iterable[Iterable[float]] = ()):
        if dim < 1:
            raise PartitionError(f"state dimension must be positive, got {dim}")
        self.dim = dim
        self._coords = np.empty((0, dim))
        self._tree = None
        self._graph = None
        for point in points:
            self.insert_codeword(point)

    def __len__(self) -> int:
        return self._coords.shape[0]

    @property
    def coords(self) -> np.ndarray:
        return self._coords.copy()

    def codeword(self, k: int) -> np.ndarray:
        self._check_index(k)
        return self._coords[k].copy()

    def nearest(self, state) -> int:
        """Index of the codeword closest to ``state`` in L1; ties go to the lowest index."""
        state = self._check_state(state)
        distance, _ = self._tree.query(state[None, :], k=1)
        candidates = self._tree.query_radius(
            state[None, :], r=self._tie_radius(distance[0, 0])
        )[0]
        return self._lowest_of_closest(state, candidates)

    def nearest_many(self, states) -> np.ndarray:
        states = np.asarray(states, dtype=float).reshape(-1, self.dim)
        if not len(states):
            return np.empty(0, dtype=int)
        self._check_state(states[0])
        distances, _ = self._tree.query(states, k=1)
        radii = np.array([self._tie_radius(d) for d in distances[:, 0]])
        candidates = self._tree.query_radius(states, r=radii)
        return np.array(
            [
                self._lowest_of_closest(state, cands)
                for state, cands in zip(states, candidates)
            ],
            dtype=int,
        )

    def distance(self, state, k: int) -> float:
        """L1 distance between ``state`` and codeword ``k``."""
        state = as_vector(state, self.dim)
        return float(np.abs(self.codeword(k) - state).sum())

    def insert_codeword(self, point) -> int:
        point = as_vector(point, self.dim, name="codeword")
        if not np.all(np.isfinite(point)):
            raise PartitionError("degenerate codeword: coordinates must be finite")
        if len(self) and np.any(np.all(self._coords == point, axis=1)):
            raise PartitionError(f"degenerate codeword: {point.tolist()} already present")
        self._coords = np.vstack([self._coords, point])
        self._rebuild()
        logger.debug(f"Inserted codeword {len(self) - 1} at {point.tolist()}")
        return len(self) - 1

    def remove_codeword(self, k: int):
        if len(self) <= 1:
            raise PartitionError("cannot empty partition")
        self._check_index(k)
        self._coords = np.delete(self._coords, k, axis=0)
        self._rebuild()
        logger.debug(f"Removed codeword {k}, {len(self)} remain")

    def neighbours(self, k: int) -> set[int]:
        """Cells sharing a Delaunay edge with cell ``k`` (Euclidean triangulation)."""
        self._check_index(k)
        if len(self) < 2:
            return set()
        return set(self.neighbour_graph().neighbors(k))

    def neighbour_graph(self) -> nx.Graph:
        if self._graph is None:
            self._graph = neighbour_graph(self._coords)
        return self._graph

    def copy(self) -> "VoronoiPartition":
        return VoronoiPartition(self.dim, self._coords)

    def _rebuild(self):
        self._tree = KDTree(self._coords, metric="manhattan") if len(self) else None
        self._graph = None

    @staticmethod
    def _tie_radius(distance: float) -> float:
        return distance + _TIE_TOLERANCE * (1.0 + distance)

    def _lowest_of_closest(self, state: np.ndarray, candidates: np.ndarray) -> int:
        candidates = np.sort(candidates)
        exact = np.abs(self._coords[candidates] - state).sum(axis=1)
        return int(candidates[np.argmin(exact)])

    def _check_state(self, state) -> np.ndarray:
        if not len(self):
            raise PartitionError("no codewords")
        return as_vector(state, self.dim)

    def _check_index(self, k: int):
        if not 0 <= k < len(self):
            raise PartitionError(f"cell index {k} outside 0..{len(self) - 1}")
