"""
Volume of compact hyperbolic tetrahedra.

A tetrahedron ABCD is cut from A into at most six signed orthoschemes: H is the foot of the perpendicular
from A onto the plane BCD, and for each edge pq of BCD (opposite vertex r) M is the foot of the perpendicular
from H onto the line pq. The orthoschemes (A, H, M, p) and (A, H, M, q) enter with the signs of H relative to
pq and of M relative to p and q. Each orthoscheme volume comes from its three essential dihedral angles.
"""

from typing import NamedTuple

import numpy as np

from hypfull.hypfun.lobachevsky import orthoscheme_volume
from hypfull.realize.minkowski import SIGNATURE, minkowski_dot

DEGENERACY_TOLERANCE = 1e-13

_EDGES = ((1, 2, 3), (2, 3, 1), (3, 1, 2))


class Tetrahedron(NamedTuple):
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.stack([self.a, self.b, self.c, self.d])


def _normalize_timelike(x: np.ndarray) -> np.ndarray:
    norm = np.sqrt(np.maximum(-minkowski_dot(x, x), 1e-300))
    return x / (np.sign(x[..., 3]) * norm)[..., None]


def _plane_normals(triples: np.ndarray) -> np.ndarray:
    """Minkowski normals J·cross(a, b, c) of the planes through point triples, shape (..., 3, 4) -> (..., 4)."""
    cofactors = [
        (-1) ** k * np.linalg.det(np.delete(triples, k, axis=-1)) for k in range(4)
    ]
    return np.stack(cofactors, axis=-1) * SIGNATURE


def _orthoscheme_volumes(vertices: np.ndarray, tolerance: float) -> np.ndarray:
    """Volumes of orthoschemes P0 P1 P2 P3 (P0P1, P1P2, P2P3 pairwise orthogonal), shape (k, 4, 4)."""
    volumes = np.zeros(len(vertices))
    valid = np.abs(np.linalg.det(vertices)) >= tolerance
    if not valid.any():
        return volumes
    points = vertices[valid]

    outward = []
    for i in range(4):
        others = np.delete(points, i, axis=1)
        normal = _plane_normals(others)
        normal = normal / np.sqrt(np.maximum(minkowski_dot(normal, normal), 1e-300))[:, None]
        side = np.sign(minkowski_dot(normal, points[:, i]))
        outward.append(-side[:, None] * normal)

    def angle(i: int, j: int) -> np.ndarray:
        return np.arccos(np.clip(-minkowski_dot(outward[i], outward[j]), -1.0, 1.0))

    volumes[valid] = orthoscheme_volume(angle(0, 1), angle(1, 2), angle(2, 3))
    return volumes


def tetra_volumes(vertices: np.ndarray, tolerance: float = DEGENERACY_TOLERANCE) -> tuple[np.ndarray, np.ndarray]:
    """
    Volumes of a batch of tetrahedra with vertices on the upper hyperboloid.

    Args:
        vertices (np.ndarray): shape (m, 4, 4), one row per vertex.
        tolerance (float): |det| below which a tetrahedron counts as degenerate.

    Returns:
        tuple[np.ndarray, np.ndarray]: volumes (m,) and the degeneracy flags (m,).

    """
    vertices = np.asarray(vertices, dtype=float)
    degenerate = np.abs(np.linalg.det(vertices)) < tolerance
    volumes = np.zeros(len(vertices))
    if degenerate.all():
        return volumes, degenerate
    tets = vertices[~degenerate]
    apex, base = tets[:, 0], tets[:, 1:]

    normal = _plane_normals(base)
    normal = normal / np.sqrt(minkowski_dot(normal, normal))[:, None]
    foot = _normalize_timelike(apex - minkowski_dot(apex, normal)[:, None] * normal)
    weights = np.einsum("mij,mj->mi", np.linalg.pinv(np.swapaxes(base, 1, 2)), foot)

    pieces = []
    signs = []
    for p, q, r in _EDGES:
        vp, vq = tets[:, p], tets[:, q]
        pq = minkowski_dot(vp, vq)
        system = np.stack([np.stack([-np.ones_like(pq), pq], -1), np.stack([pq, -np.ones_like(pq)], -1)], -2)
        rhs = np.stack([minkowski_dot(foot, vp), minkowski_dot(foot, vq)], -1)
        alpha, beta = np.linalg.solve(system, rhs[..., None])[..., 0].T
        middle = _normalize_timelike(alpha[:, None] * vp + beta[:, None] * vq)
        side = np.sign(weights[:, r - 1])
        pieces.append(np.stack([apex, foot, middle, vp], axis=1))
        signs.append(side * np.sign(beta))
        pieces.append(np.stack([apex, foot, middle, vq], axis=1))
        signs.append(side * np.sign(alpha))

    stacked = np.stack(pieces, axis=1)
    orthoschemes = _orthoscheme_volumes(stacked.reshape(-1, 4, 4), tolerance).reshape(len(tets), 6)
    volumes[~degenerate] = np.sum(np.stack(signs, axis=1) * orthoschemes, axis=1)
    return volumes, degenerate


def tetra_volume(t: Tetrahedron, tolerance: float = DEGENERACY_TOLERANCE) -> float:
    """Volume of one compact tetrahedron; 0 for a degenerate one."""
    volumes, _ = tetra_volumes(t.as_array()[None], tolerance)
    return float(volumes[0])
