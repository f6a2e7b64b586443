"""Delaunay adjacency between codewords.

Exact Bowyer-Watson triangulation in two dimensions, sorted-order adjacency
in one dimension and a seeded witness-sampling approximation above two.
"""
from collections import Counter

import networkx as nx
import numpy as np
from sklearn.neighbors import KDTree

# Super-triangle half-size, in units of the normalized point cloud.
SUPER_SCALE = 1.0e5
WITNESS_SEED = 0
WITNESSES_PER_DIM = 4096


def _orientation(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _in_circumcircle(a, b, c, p) -> bool:
    """True when ``p`` lies strictly inside the circumcircle of the CCW triangle ``abc``."""
    adx, ady = a[0] - p[0], a[1] - p[1]
    bdx, bdy = b[0] - p[0], b[1] - p[1]
    cdx, cdy = c[0] - p[0], c[1] - p[1]
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (
        alift * (bdx * cdy - cdx * bdy)
        + blift * (cdx * ady - adx * cdy)
        + clift * (adx * bdy - bdx * ady)
    )
    return det > 0.0


def bowyer_watson(points: np.ndarray) -> list[tuple[int, int, int]]:
    """Incremental Delaunay triangulation of 2-D ``points``.

    Points are inserted in index order. A point exactly on a circumcircle does
    not invalidate the existing triangle, so cocircular ties keep the edges of
    the earlier (lower-index) points.

    Returns:
        CCW triangles over ``range(len(points) + 3)``; indices ``>= len(points)``
        are the vertices of the enclosing super-triangle.
    """
    n = len(points)
    center = (points.max(axis=0) + points.min(axis=0)) / 2.0
    span = float(np.ptp(points, axis=0).max()) or 1.0
    normalized = (points - center) / span

    super_vertices = np.array(
        [[-SUPER_SCALE, -SUPER_SCALE], [SUPER_SCALE, -SUPER_SCALE], [0.0, SUPER_SCALE]]
    )
    vertices = np.vstack([normalized, super_vertices])
    triangles = [(n, n + 1, n + 2)]

    for i in range(n):
        p = vertices[i]
        bad = [
            t
            for t in triangles
            if _in_circumcircle(vertices[t[0]], vertices[t[1]], vertices[t[2]], p)
        ]
        directed = [(t[k], t[(k + 1) % 3]) for t in bad for k in range(3)]
        shared = Counter(frozenset(edge) for edge in directed)
        boundary = [edge for edge in directed if shared[frozenset(edge)] == 1]

        bad_set = set(bad)
        triangles = [t for t in triangles if t not in bad_set]
        for u, v in boundary:
            triangle = (u, v, i)
            if _orientation(vertices[u], vertices[v], p) < 0:
                triangle = (v, u, i)
            triangles.append(triangle)

    return triangles


def _edges_2d(points: np.ndarray) -> set[tuple[int, int]]:
    n = len(points)
    edges = set()
    for triangle in bowyer_watson(points):
        for k in range(3):
            u, v = triangle[k], triangle[(k + 1) % 3]
            if u < n and v < n:
                edges.add((min(u, v), max(u, v)))
    return edges


def _edges_1d(points: np.ndarray) -> set[tuple[int, int]]:
    order = np.argsort(points[:, 0], kind="stable")
    return {
        (int(min(u, v)), int(max(u, v))) for u, v in zip(order[:-1], order[1:])
    }


def _edges_witness(points: np.ndarray) -> set[tuple[int, int]]:
    """Pairs that are the two closest codewords of some sampled point.

    Approximate: adjacencies whose shared facet is thinner than the sampling
    density can be missed.
    """
    dim = points.shape[1]
    rng = np.random.default_rng(WITNESS_SEED)
    samples = rng.uniform(
        points.min(axis=0), points.max(axis=0), size=(WITNESSES_PER_DIM * dim, dim)
    )
    _, nearest_two = KDTree(points).query(samples, k=2)
    return {(int(min(u, v)), int(max(u, v))) for u, v in nearest_two}


def delaunay_edges(points: np.ndarray) -> set[tuple[int, int]]:
    """Undirected Delaunay edges ``(i, j)`` with ``i < j`` between the rows of ``points``."""
    points = np.asarray(points, dtype=float)
    n, dim = points.shape
    if n < 2:
        return set()
    if n == 2:
        return {(0, 1)}
    if dim == 1:
        return _edges_1d(points)
    if dim == 2:
        return _edges_2d(points)
    return _edges_witness(points)


def neighbour_graph(points: np.ndarray) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(len(points)))
    graph.add_edges_from(delaunay_edges(points))
    return graph
