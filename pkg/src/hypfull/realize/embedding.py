"""Initial face normals: Tutte embedding, lift to the sphere at infinity, one spherical cap per face."""

import numpy as np
from loguru import logger
from scipy.sparse import lil_matrix
from scipy.sparse.linalg import spsolve

from hypfull.graphcore.model import FullereneGraph
from hypfull.realize.minkowski import (
    lorentz_boost,
    lorentz_inverse,
    minkowski_dot,
    orthonormal_frame,
    plane_intersection,
)

CENTERING_STEPS = 60
MAX_BOOST_SPEED = 0.9
SCALE_BISECTION_STEPS = 40
MAX_CAP_RADIUS = np.pi - 1e-3


def gauge_faces(g: FullereneGraph) -> tuple[int, int, int]:
    """The three faces around vertex 0, in rotation order."""
    a, b, c = g.vertex_faces[0]
    return a, b, c


def adjacent_face_pairs(g: FullereneGraph) -> list[tuple[int, int]]:
    pairs = {tuple(sorted((g.face_of_edge[u, v], g.face_of_edge[v, u]))) for u, v in g.edges}
    return sorted(pairs)


def tutte_embedding(g: FullereneGraph, outer_face: int, rng: np.random.Generator | None, jitter: float) -> np.ndarray:
    """Planar barycentric embedding with the outer face on the unit circle; weights jittered when rng is given."""
    outer = g.faces[outer_face]
    on_circle = set(outer)
    n = g.n_vertices
    positions = np.zeros((n, 2))
    angles = 2 * np.pi * np.arange(len(outer)) / len(outer)
    positions[list(outer)] = np.column_stack([np.cos(angles), np.sin(angles)])

    inner = [v for v in range(n) if v not in on_circle]
    index = {v: i for i, v in enumerate(inner)}
    laplacian = lil_matrix((len(inner), len(inner)))
    rhs = np.zeros((len(inner), 2))
    for v in inner:
        row = index[v]
        for w in g.adjacency[v]:
            weight = 1.0 if rng is None else 1.0 + jitter * rng.uniform(-1.0, 1.0)
            laplacian[row, row] += weight
            if w in index:
                laplacian[row, index[w]] -= weight
            else:
                rhs[row] += weight * positions[w]
    solution = spsolve(laplacian.tocsr(), rhs)
    positions[inner] = np.asarray(solution).reshape(len(inner), 2)
    return positions


def inverse_stereographic(points: np.ndarray) -> np.ndarray:
    """Plane to unit sphere: (2u, 2v, |p|^2 - 1) / (|p|^2 + 1)."""
    sq = np.sum(points * points, axis=1, keepdims=True)
    return np.column_stack([2 * points, sq - 1]) / (sq + 1)


def center_on_sphere(points: np.ndarray, steps: int = CENTERING_STEPS, tolerance: float = 1e-9) -> np.ndarray:
    """Move sphere points by Lorentz boosts until their Euclidean barycenter is the origin."""
    ideal = np.column_stack([points, np.ones(len(points))])
    for _ in range(steps):
        sphere = ideal[:, :3] / ideal[:, 3:4]
        mean = sphere.mean(axis=0)
        speed = np.linalg.norm(mean)
        if speed < tolerance:
            break
        beta = mean * min(1.0, MAX_BOOST_SPEED / speed)
        ideal = ideal @ lorentz_boost(beta).T
    return ideal[:, :3] / ideal[:, 3:4]


def fit_cap(face_points: np.ndarray, other_points: np.ndarray) -> tuple[np.ndarray, float] | None:
    """
    Spherical cap bounded by the best-fit circle {p : c.p = cos(rho)} of a face's points.

    The center c points towards the face, away from the other vertices.
    """
    mean = face_points.mean(axis=0)
    _, _, vt = np.linalg.svd(face_points - mean)
    c = vt[-1]
    d = float(c @ mean)
    if float(np.mean(other_points @ c)) > d:
        c, d = -c, -d
    if abs(d) >= 1.0:
        return None
    return c, float(np.arccos(d))


def cap_normals(centers: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """Unit space-like normal (c, cos rho) / sin rho of the plane spanned by each cap's circle."""
    return np.column_stack([centers, np.cos(radii)]) / np.sin(radii)[:, None]


def _right_angle_scale(centers: np.ndarray, radii: np.ndarray, pairs: np.ndarray) -> float:
    """Common radius factor making the median adjacent-face inner product zero."""

    def median_product(scale: float) -> float:
        normals = cap_normals(centers, np.minimum(radii * scale, MAX_CAP_RADIUS))
        return float(np.median(minkowski_dot(normals[pairs[:, 0]], normals[pairs[:, 1]])))

    low, high = 0.5, 2.0
    for _ in range(SCALE_BISECTION_STEPS):
        middle = 0.5 * (low + high)
        if median_product(middle) < 0:
            low = middle
        else:
            high = middle
    return 0.5 * (low + high)


def initial_normals(g: FullereneGraph, rng: np.random.Generator | None, jitter: float) -> np.ndarray | None:
    """
    Face normals of a first guess, moved by a Lorentz map so the gauge faces sit on the coordinate axes.

    The three gauge normals are then replaced by the axes exactly. None if the guess is degenerate.
    """
    gauge = list(gauge_faces(g))
    sphere = center_on_sphere(inverse_stereographic(tutte_embedding(g, gauge[0], rng, jitter)))

    centers = np.zeros((g.n_faces, 3))
    radii = np.zeros(g.n_faces)
    for index, face in enumerate(g.faces):
        mask = np.zeros(g.n_vertices, dtype=bool)
        mask[list(face)] = True
        cap = fit_cap(sphere[mask], sphere[~mask])
        if cap is None:
            logger.debug(f"Graph '{g.graph_id}': degenerate circle fit for face {index}")
            return None
        centers[index], radii[index] = cap

    pairs = np.array(adjacent_face_pairs(g))
    scale = _right_angle_scale(centers, radii, pairs)
    normals = cap_normals(centers, np.minimum(radii * scale, MAX_CAP_RADIUS))
    logger.debug(f"Graph '{g.graph_id}': cap radii scaled by {scale:.4f}")

    corner, _ = plane_intersection(normals[gauge])
    if minkowski_dot(corner, corner) >= 0:
        logger.debug(f"Graph '{g.graph_id}': gauge planes do not meet inside hyperbolic space")
        return None
    frame = orthonormal_frame(corner * np.sign(corner[3]), normals[gauge])
    if frame is None:
        return None

    normals = normals @ lorentz_inverse(frame).T
    normals[gauge] = np.eye(4)[:3]
    return normals
