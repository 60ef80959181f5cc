"""
Minkowski space R^{3,1} with signature (+, +, +, -); the time coordinate is the last one.

Points of hyperbolic space live on the upper sheet <x, x> = -1, x4 > 0; planes are given by unit
space-like normals.
"""

import numpy as np
from numpy.typing import ArrayLike

SIGNATURE = np.array([1.0, 1.0, 1.0, -1.0])
METRIC = np.diag(SIGNATURE)


def minkowski_dot(x: ArrayLike, y: ArrayLike) -> np.ndarray:
    """<x, y> along the last axis, broadcasting over leading axes."""
    return np.sum(np.asarray(x) * SIGNATURE * np.asarray(y), axis=-1)


def gram_matrix(vectors: np.ndarray) -> np.ndarray:
    return (vectors * SIGNATURE) @ vectors.T


def lower_index(x: ArrayLike) -> np.ndarray:
    """J x, so that <x, y> = (J x) . y."""
    return np.asarray(x) * SIGNATURE


def project_to_hyperboloid(x: ArrayLike) -> np.ndarray:
    """Scale time-like vectors onto the upper sheet."""
    x = np.asarray(x, dtype=float)
    norm = np.sqrt(-minkowski_dot(x, x))
    return x / np.asarray(np.sign(x[..., -1]) * norm)[..., None]


def normalize_spacelike(x: ArrayLike) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x / np.asarray(np.sqrt(minkowski_dot(x, x)))[..., None]


def hyperbolic_distance(x: ArrayLike, y: ArrayLike) -> np.ndarray:
    """arccosh(-<x, y>) for points on the hyperboloid."""
    return np.arccosh(np.maximum(-minkowski_dot(x, y), 1.0))


def to_ball_model(points: ArrayLike) -> np.ndarray:
    """Hyperboloid to Poincaré ball: (x1, x2, x3) / (1 + x4)."""
    p = np.asarray(points, dtype=float)
    return p[..., :3] / (1.0 + p[..., 3:4])


def from_ball_model(points: ArrayLike) -> np.ndarray:
    """Poincaré ball to hyperboloid: (2y, 1 + |y|^2) / (1 - |y|^2)."""
    y = np.asarray(points, dtype=float)
    sq = np.sum(y * y, axis=-1, keepdims=True)
    return np.concatenate([2.0 * y, 1.0 + sq], axis=-1) / (1.0 - sq)


def lorentz_boost(beta: ArrayLike) -> np.ndarray:
    """Boost with velocity beta (|beta| < 1): t' = γ(t - β.x), x' = x + ((γ-1)(β.x)/|β|^2 - γt) β."""
    b = np.asarray(beta, dtype=float)
    speed_sq = float(b @ b)
    boost = np.eye(4)
    if speed_sq == 0.0:
        return boost
    gamma = 1.0 / np.sqrt(1.0 - speed_sq)
    boost[:3, :3] += (gamma - 1.0) * np.outer(b, b) / speed_sq
    boost[:3, 3] = -gamma * b
    boost[3, :3] = -gamma * b
    boost[3, 3] = gamma
    return boost


def lorentz_inverse(frame: np.ndarray) -> np.ndarray:
    """Inverse of a matrix whose columns are a Minkowski-orthonormal basis: J F^T J."""
    return METRIC @ frame.T @ METRIC


def orthonormal_frame(timelike: ArrayLike, spacelike: ArrayLike) -> np.ndarray | None:
    """
    Gram-Schmidt in Minkowski space.

    Returns the matrix with columns (u1, u2, u3, w): w the normalized upper time-like vector, u_k the
    space-like vectors made orthonormal in the given order. None if the input is degenerate.
    """
    w = np.asarray(timelike, dtype=float)
    if minkowski_dot(w, w) >= 0:
        return None
    w = project_to_hyperboloid(w)
    basis = []
    for vector in np.asarray(spacelike, dtype=float):
        u = vector + minkowski_dot(vector, w) * w
        for previous in basis:
            u = u - minkowski_dot(u, previous) * previous
        length_sq = minkowski_dot(u, u)
        if length_sq <= 1e-14:  # noqa: PLR2004
            return None
        basis.append(u / np.sqrt(length_sq))
    return np.column_stack([*basis, w])


def plane_intersection(normals: np.ndarray) -> tuple[np.ndarray, float]:
    """
    Common point of three planes: the null vector of the rows (J e_i).

    Returns the unnormalized null vector and the condition number of the 3x4 system.
    """
    _, singular, vt = np.linalg.svd(lower_index(normals))
    condition = singular[0] / singular[-1] if singular[-1] > 0 else np.inf
    return vt[-1], float(condition)
