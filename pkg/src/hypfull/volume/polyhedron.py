import numpy as np
from loguru import logger
from pydantic import BaseModel

from hypfull.core.config.run import SolverConfig, VolumeConfig
from hypfull.core.errors import DecompositionError, DomainError
from hypfull.graphcore.model import FullereneGraph
from hypfull.hypfun.bounds import (
    BoundSandwich,
    IdealBounds,
    bound_sandwich,
    ideal_bounds,
    polyhedron_area,
    sphericity_denominator,
)
from hypfull.realize.minkowski import minkowski_dot, project_to_hyperboloid
from hypfull.realize.solver import Realization, realize
from hypfull.volume.tetrahedron import Tetrahedron, tetra_volumes

REPORT_DECIMALS = 6


class HypVolumeReport(BaseModel):
    graph_id: str
    n_vertices: int
    volume: float
    volume_rounded: float
    sphericity: float
    area: float
    sandwich: BoundSandwich
    ideal_bounds: IdealBounds
    tetra_count: int
    degenerate_tetrahedra: int
    decomposition_residual: float
    realization_residual: float

    def as_row(self) -> dict[str, float | int | None]:
        return {
            "volume": self.volume,
            "sphericity": self.sphericity,
            "lower_bound": self.sandwich.lower,
            "upper_bound_atkinson": self.sandwich.upper_atkinson,
            "upper_bound_fullerene": self.sandwich.upper_fullerene,
        }


def sphericity(volume: float, n: int) -> float:
    """Volume over the volume of the ball whose area equals the area of a right-angled N-vertex polyhedron."""
    if volume <= 0:
        msg = f"Sphericity needs a positive volume, got {volume}"
        logger.error(msg)
        raise DomainError(msg)
    return volume / sphericity_denominator(n)


def face_apices(r: Realization, g: FullereneGraph) -> np.ndarray:
    """Barycenter of each face's vertices, moved onto the face plane."""
    points = r.points
    normals = r.normals
    apices = np.zeros((g.n_faces, 4))
    for index, face in enumerate(g.faces):
        center = project_to_hyperboloid(points[list(face)].sum(axis=0))
        e = normals[index]
        apices[index] = project_to_hyperboloid(center - minkowski_dot(center, e) * e)
    return apices


def _decomposition(r: Realization, g: FullereneGraph, apex: np.ndarray, apices: np.ndarray) -> np.ndarray:
    """Tetrahedra (O, F, v_a, v_b) for every face and every boundary edge, all with the same orientation."""
    normals = r.normals
    inside = minkowski_dot(normals, apex)
    if np.any(inside >= 0):
        msg = f"Graph '{g.graph_id}': decomposition apex is not strictly inside face {int(np.argmax(inside))}"
        logger.error(msg)
        raise DecompositionError(msg)

    points = r.points
    tets = np.array(
        [
            [apex, apices[index], points[face[i]], points[face[(i + 1) % len(face)]]]
            for index, face in enumerate(g.faces)
            for i in range(len(face))
        ]
    )
    orientation = np.sign(np.linalg.det(tets))
    if np.all(orientation < 0):
        tets = tets[:, [0, 1, 3, 2]]
    elif not np.all(orientation > 0):
        msg = f"Graph '{g.graph_id}': tetrahedra of the decomposition have mixed orientations"
        logger.error(msg)
        raise DecompositionError(msg)
    return tets


def decompose(r: Realization, g: FullereneGraph) -> list[Tetrahedron]:
    """Cone from the normalized vertex barycenter over the faces, each face coned from its apex."""
    apex = project_to_hyperboloid(r.points.sum(axis=0))
    tets = _decomposition(r, g, apex, face_apices(r, g))
    return [Tetrahedron(*t) for t in tets]


def _cone_volume(
    r: Realization, g: FullereneGraph, apex: np.ndarray, apices: np.ndarray, tolerance: float
) -> tuple[float, int, int]:
    volumes, degenerate = tetra_volumes(_decomposition(r, g, apex, apices), tolerance)
    return float(volumes.sum()), len(volumes), int(degenerate.sum())


def polyhedron_volume(
    g: FullereneGraph,
    solver: SolverConfig | None = None,
    volume_cfg: VolumeConfig | None = None,
    realization: Realization | None = None,
) -> HypVolumeReport:
    """
    Realize, decompose and sum; the volume is recomputed from a second apex as a consistency check.

    Args:
        g (FullereneGraph): validated fullerene.
        solver (SolverConfig | None): realization settings, used when `realization` is not given.
        volume_cfg (VolumeConfig | None): apex and degeneracy tolerances.
        realization (Realization | None): a previously computed realization of `g`.

    """
    volume_cfg = volume_cfg or VolumeConfig()
    r = realization if realization is not None else realize(g, solver)

    apices = face_apices(r, g)
    apex = project_to_hyperboloid(r.points.sum(axis=0))
    volume, count, degenerate = _cone_volume(r, g, apex, apices, volume_cfg.degeneracy_tolerance)
    alternative, _, _ = _cone_volume(
        r, g, project_to_hyperboloid(apices.sum(axis=0)), apices, volume_cfg.degeneracy_tolerance
    )
    residual = abs(volume - alternative)
    if residual > volume_cfg.apex_tolerance:
        msg = f"Graph '{g.graph_id}': volume depends on the apex ({volume:.10f} vs {alternative:.10f})"
        logger.error(msg)
        raise DecompositionError(msg)

    report = HypVolumeReport(
        graph_id=g.graph_id,
        n_vertices=g.n_vertices,
        volume=volume,
        volume_rounded=round(volume, REPORT_DECIMALS),
        sphericity=sphericity(volume, g.n_vertices),
        area=polyhedron_area(g.n_vertices),
        sandwich=bound_sandwich(g, volume),
        ideal_bounds=ideal_bounds(g.n_vertices),
        tetra_count=count,
        degenerate_tetrahedra=degenerate,
        decomposition_residual=residual,
        realization_residual=r.residual,
    )
    logger.debug(f"Graph '{g.graph_id}': volume {volume:.9f}, sphericity {report.sphericity:.6f}")
    return report
