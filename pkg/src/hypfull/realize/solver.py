"""
Right-angled realization of a fullerene in the hyperboloid model.

Unknowns are the unit outward normals of all faces except the three gauge faces around vertex 0, which are
pinned to the first three coordinate axes. Equations are <e_i, e_i> = 1 for every free face and
<e_i, e_j> = 0 for every adjacent face pair not inside the gauge triple; the system is square (2N - 4).
"""

from typing import NamedTuple

import numpy as np
from loguru import logger
from pydantic import BaseModel

from hypfull.core.config.run import SolverConfig
from hypfull.core.errors import RealizationError
from hypfull.graphcore.model import FullereneGraph
from hypfull.graphcore.validation import validate_fullerene
from hypfull.realize.embedding import adjacent_face_pairs, gauge_faces, initial_normals
from hypfull.realize.minkowski import (
    SIGNATURE,
    gram_matrix,
    hyperbolic_distance,
    minkowski_dot,
    plane_intersection,
    project_to_hyperboloid,
    to_ball_model,
)

MAX_HALVINGS = 12
HOMOTOPY_STEP_TOLERANCE = 1e-8


class Realization(BaseModel):
    """
    Converged realization of one fullerene.

    Attributes:
        face_normals (list[list[float]]): unit space-like outward normal per face, in face order.
        vertex_points (list[list[float]]): per-vertex point on the upper hyperboloid.
        residual (float): largest violation of the Gram equations.

    """

    graph_id: str
    n_vertices: int
    gauge_faces: tuple[int, int, int]
    face_normals: list[list[float]]
    vertex_points: list[list[float]]
    residual: float
    iterations: int
    attempts: int
    used_homotopy: bool = False

    @property
    def normals(self) -> np.ndarray:
        return np.asarray(self.face_normals)

    @property
    def points(self) -> np.ndarray:
        return np.asarray(self.vertex_points)

    @property
    def gram(self) -> np.ndarray:
        return gram_matrix(self.normals)

    def ball_points(self) -> np.ndarray:
        return to_ball_model(self.points)

    def edge_lengths(self, g: FullereneGraph) -> np.ndarray:
        points = self.points
        u, v = np.array(g.edges).T
        return hyperbolic_distance(points[u], points[v])


def realization_to_dict(r: Realization) -> dict:
    """JSON-ready export: normals, hyperboloid and ball coordinates, residual and the face Gram matrix."""
    return {
        "graph_id": r.graph_id,
        "n_vertices": r.n_vertices,
        "gauge_faces": list(r.gauge_faces),
        "residual": r.residual,
        "iterations": r.iterations,
        "attempts": r.attempts,
        "face_normals": r.face_normals,
        "vertices_hyperboloid": r.vertex_points,
        "vertices_ball": r.ball_points().tolist(),
        "gram": r.gram.tolist(),
    }


class _Solve(NamedTuple):
    x: np.ndarray
    residual: float
    iterations: int
    converged: bool


class GramSystem:
    """Gram equations of a fullerene with the gauge faces pinned."""

    def __init__(self, g: FullereneGraph) -> None:
        self.n_faces = g.n_faces
        self.gauge = gauge_faces(g)
        self.free = np.array([face for face in range(self.n_faces) if face not in self.gauge])
        gauge = set(self.gauge)
        pairs = [(i, j) for i, j in adjacent_face_pairs(g) if not (i in gauge and j in gauge)]
        self.pairs = np.array(pairs)
        self.pinned = np.zeros((self.n_faces, 4))
        self.pinned[list(self.gauge)] = np.eye(4)[:3]
        self.n_equations = len(self.free) + len(self.pairs)

    def unpack(self, x: np.ndarray) -> np.ndarray:
        normals = self.pinned.copy()
        normals[self.free] = x.reshape(-1, 4)
        return normals

    def pack(self, normals: np.ndarray) -> np.ndarray:
        return normals[self.free].reshape(-1).copy()

    def pair_products(self, x: np.ndarray) -> np.ndarray:
        normals = self.unpack(x)
        return minkowski_dot(normals[self.pairs[:, 0]], normals[self.pairs[:, 1]])

    def evaluate(self, x: np.ndarray, targets: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Residual vector and Jacobian with respect to the free normals."""
        normals = self.unpack(x)
        lowered = normals * SIGNATURE
        i, j = self.pairs[:, 0], self.pairs[:, 1]
        residual = np.concatenate(
            [
                minkowski_dot(normals[self.free], normals[self.free]) - 1.0,
                minkowski_dot(normals[i], normals[j]) - targets,
            ]
        )

        jacobian = np.zeros((self.n_equations, self.n_faces, 4))
        rows = np.arange(len(self.free))
        jacobian[rows, self.free] = 2.0 * lowered[self.free]
        rows = len(self.free) + np.arange(len(self.pairs))
        jacobian[rows, i] = lowered[j]
        jacobian[rows, j] = lowered[i]
        return residual, jacobian[:, self.free, :].reshape(self.n_equations, -1)


def _levenberg_marquardt(
    system: GramSystem, x0: np.ndarray, targets: np.ndarray, cfg: SolverConfig, tolerance: float
) -> _Solve:
    """Damped Gauss-Newton: solve (J^T J + λI) δ = J^T r, halve the step while the residual grows."""
    x = x0
    damping = cfg.damping
    residual, jacobian = system.evaluate(x, targets)
    cost = float(residual @ residual)
    for iteration in range(cfg.max_iterations):
        worst = float(np.max(np.abs(residual)))
        if worst <= tolerance:
            return _Solve(x, worst, iteration, converged=True)

        normal_matrix = jacobian.T @ jacobian
        step, *_ = np.linalg.lstsq(normal_matrix + damping * np.eye(len(x)), jacobian.T @ residual, rcond=None)
        for _ in range(MAX_HALVINGS):
            candidate = x - step
            trial_residual, trial_jacobian = system.evaluate(candidate, targets)
            trial_cost = float(trial_residual @ trial_residual)
            if trial_cost < cost:
                x, residual, jacobian, cost = candidate, trial_residual, trial_jacobian, trial_cost
                damping = max(damping * 0.1, 1e-15)
                break
            step *= 0.5
            damping *= 10.0
        else:
            return _Solve(x, worst, iteration, converged=False)

    worst = float(np.max(np.abs(residual)))
    return _Solve(x, worst, cfg.max_iterations, converged=worst <= tolerance)


def _homotopy(system: GramSystem, x0: np.ndarray, cfg: SolverConfig) -> _Solve:
    """Move the adjacent-pair targets linearly from the guess's own values to 0."""
    start = system.pair_products(x0)
    x = x0
    iterations = 0
    result = _Solve(x0, np.inf, 0, converged=False)
    for step in range(1, cfg.homotopy_steps + 1):
        last = step == cfg.homotopy_steps
        targets = (1.0 - step / cfg.homotopy_steps) * start
        tolerance = cfg.tolerance if last else max(cfg.tolerance, HOMOTOPY_STEP_TOLERANCE)
        result = _levenberg_marquardt(system, x, targets, cfg, tolerance)
        x = result.x
        iterations += result.iterations
        logger.debug(f"Homotopy step {step}/{cfg.homotopy_steps}: residual {result.residual:.3e}")
    return result._replace(iterations=iterations)


def _vertex_points(normals: np.ndarray, g: FullereneGraph, cfg: SolverConfig) -> tuple[np.ndarray | None, str]:
    gram = gram_matrix(normals)
    adjacent = np.array(adjacent_face_pairs(g))
    gram_error = max(
        float(np.max(np.abs(np.diag(gram) - 1.0))),
        float(np.max(np.abs(gram[adjacent[:, 0], adjacent[:, 1]]))),
    )
    if gram_error > cfg.gram_check_tolerance:
        return None, f"Gram residual {gram_error:.3e} exceeds {cfg.gram_check_tolerance:.1e}"

    points = np.zeros((g.n_vertices, 4))
    for v, faces in enumerate(g.vertex_faces):
        null, condition = plane_intersection(normals[list(faces)])
        if condition > cfg.condition_threshold:
            return None, f"vertex {v}: planes of faces {faces} are ill-conditioned (condition {condition:.2e})"
        if minkowski_dot(null, null) >= 0:
            return None, f"vertex {v}: planes of faces {faces} do not meet inside hyperbolic space"
        points[v] = project_to_hyperboloid(null)

    incident = np.zeros((g.n_vertices, g.n_faces), dtype=bool)
    for v, faces in enumerate(g.vertex_faces):
        incident[v, list(faces)] = True
    products = (points * SIGNATURE) @ normals.T
    if np.any(products[~incident] >= 0):
        v, m = np.argwhere((products >= 0) & ~incident)[0]
        return None, f"interior condition fails: vertex {v} is not strictly inside the plane of face {m}"

    separated = gram[~np.eye(g.n_faces, dtype=bool) & ~_adjacency(g)]
    if np.any(separated >= -1.0):
        return None, f"non-adjacent faces with inner product {float(separated.max()):.6f} >= -1"
    return points, ""


def _adjacency(g: FullereneGraph) -> np.ndarray:
    adjacent = np.zeros((g.n_faces, g.n_faces), dtype=bool)
    for i, j in adjacent_face_pairs(g):
        adjacent[i, j] = adjacent[j, i] = True
    return adjacent


def extract_vertices(normals: np.ndarray, g: FullereneGraph, cfg: SolverConfig | None = None) -> np.ndarray:
    """
    Vertices as the common points of their three face planes, normalized to <v, v> = -1, v4 > 0.

    Raises:
        RealizationError: when the normals violate the Gram equations, a triple of planes is
            ill-conditioned, or a vertex breaks the interior condition.

    """
    cfg = cfg or SolverConfig()
    points, problem = _vertex_points(np.asarray(normals, dtype=float), g, cfg)
    if points is None:
        msg = f"Graph '{g.graph_id}': cannot extract vertices, {problem}"
        logger.error(msg)
        raise RealizationError(msg)
    return points


def realize(g: FullereneGraph, cfg: SolverConfig | None = None) -> Realization:
    """
    Realize a fullerene as a compact right-angled polyhedron.

    Each attempt starts from a jittered Tutte guess seeded by (cfg.seed, attempt), runs damped Gauss-Newton
    and falls back to the Gram homotopy when it stalls.
    """
    cfg = cfg or SolverConfig()
    validate_fullerene(g).raise_for_failures()
    system = GramSystem(g)
    best = np.inf
    iterations = 0

    for attempt in range(cfg.retries + 1):
        rng = np.random.default_rng([cfg.seed, attempt])
        guess = initial_normals(g, rng, cfg.jitter)
        if guess is None:
            logger.warning(f"Graph '{g.graph_id}': attempt {attempt + 1} has a degenerate initial guess")
            continue

        x0 = system.pack(guess)
        result = _levenberg_marquardt(system, x0, np.zeros(len(system.pairs)), cfg, cfg.tolerance)
        used_homotopy = False
        if not result.converged:
            logger.warning(
                f"Graph '{g.graph_id}': Gauss-Newton stalled at residual {result.residual:.3e}, "
                f"continuing by homotopy (attempt {attempt + 1})"
            )
            iterations += result.iterations
            result = _homotopy(system, x0, cfg)
            used_homotopy = True
        iterations += result.iterations
        best = min(best, result.residual)
        if not result.converged:
            continue

        normals = system.unpack(result.x)
        points, problem = _vertex_points(normals, g, cfg)
        if points is None:
            logger.warning(f"Graph '{g.graph_id}': attempt {attempt + 1} converged to an invalid polyhedron, {problem}")
            continue

        logger.debug(
            f"Graph '{g.graph_id}': realized with residual {result.residual:.2e} "
            f"after {iterations} iterations, {attempt + 1} attempt(s)"
        )
        return Realization(
            graph_id=g.graph_id,
            n_vertices=g.n_vertices,
            gauge_faces=system.gauge,
            face_normals=normals.tolist(),
            vertex_points=points.tolist(),
            residual=result.residual,
            iterations=iterations,
            attempts=attempt + 1,
            used_homotopy=used_homotopy,
        )

    msg = f"Graph '{g.graph_id}': no realization after {cfg.retries + 1} attempts (best residual {best:.3e})"
    logger.error(msg)
    raise RealizationError(msg, best_residual=float(best), attempts=cfg.retries + 1)
