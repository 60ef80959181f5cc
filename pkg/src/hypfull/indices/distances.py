"""Distance-based indices: transmissions, Wiener, hyper-Wiener and the pentagon distance index W5."""

from fractions import Fraction

import numpy as np
from loguru import logger
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from hypfull.core.errors import GraphValidationError
from hypfull.graphcore.model import FullereneGraph, Rotation


def _sparse_adjacency(adjacency: Rotation) -> csr_matrix:
    rows = [v for v, nbrs in enumerate(adjacency) for _ in nbrs]
    cols = [w for nbrs in adjacency for w in nbrs]
    n = len(adjacency)
    return csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))


def _bfs_distances(adjacency: Rotation, label: str) -> np.ndarray:
    distances = shortest_path(_sparse_adjacency(adjacency), method="D", directed=False, unweighted=True)
    if np.isinf(distances).any():
        msg = f"Graph '{label}' is disconnected; distance indices are undefined"
        logger.error(msg)
        raise GraphValidationError(msg)
    return distances.astype(np.int64)


def distance_matrix(g: FullereneGraph) -> np.ndarray:
    return _bfs_distances(g.adjacency, g.graph_id)


def dual_distance_matrix(g: FullereneGraph) -> np.ndarray:
    return _bfs_distances(g.dual.adjacency, f"{g.graph_id} (dual)")


def transmissions(g: FullereneGraph, distances: np.ndarray | None = None) -> tuple[int, ...]:
    """tr(u) = sum of d(u, v) over all v."""
    d = distance_matrix(g) if distances is None else distances
    return tuple(int(t) for t in d.sum(axis=1))


def wiener(g: FullereneGraph, distances: np.ndarray | None = None) -> int:
    """Unordered-pair sum of distances, equal to half the transmission sum."""
    d = distance_matrix(g) if distances is None else distances
    return int(d.sum()) // 2


def hyper_wiener(g: FullereneGraph, distances: np.ndarray | None = None) -> Fraction:
    """Unordered-pair sum of (d + d^2) / 2."""
    d = distance_matrix(g) if distances is None else distances
    return Fraction(int(d.sum() + (d * d).sum()), 4)


def w5(g: FullereneGraph, dual_distances: np.ndarray | None = None) -> Fraction:
    """Unordered-pair sum of squared dual distances between pentagons."""
    d = dual_distance_matrix(g) if dual_distances is None else dual_distances
    pentagons = list(g.dual.pentagons)
    block = d[np.ix_(pentagons, pentagons)]
    return Fraction(int((block * block).sum()), 2)


def wiener_complexity(tr: tuple[int, ...]) -> int:
    return len(set(tr))


def is_transmission_irregular(g: FullereneGraph) -> bool:
    tr = transmissions(g)
    return wiener_complexity(tr) == len(tr)
