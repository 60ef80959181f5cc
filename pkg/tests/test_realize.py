import itertools

import numpy as np
import pytest

from hypfull.core.config.run import SolverConfig
from hypfull.core.errors import GraphValidationError, RealizationError
from hypfull.graphcore.model import FullereneGraph
from hypfull.graphcore.spiral import enumerate_isomers
from hypfull.realize.embedding import adjacent_face_pairs
from hypfull.realize.minkowski import (
    from_ball_model,
    hyperbolic_distance,
    lorentz_boost,
    minkowski_dot,
    project_to_hyperboloid,
    to_ball_model,
)
from hypfull.realize.solver import Realization, extract_vertices, realization_to_dict, realize


def test_minkowski_basics() -> None:
    origin = np.array([0.0, 0.0, 0.0, 1.0])
    assert minkowski_dot(origin, origin) == -1.0
    np.testing.assert_allclose(to_ball_model(origin), np.zeros(3))
    boost = lorentz_boost([0.3, -0.2, 0.1])
    moved = boost @ origin
    assert minkowski_dot(moved, moved) == pytest.approx(-1.0)
    assert hyperbolic_distance(origin, origin) == 0.0


def test_ball_round_trip() -> None:
    rng = np.random.default_rng(7)
    ball = rng.uniform(-0.5, 0.5, size=(25, 3))
    points = from_ball_model(ball)
    np.testing.assert_allclose(minkowski_dot(points, points), -1.0, atol=1e-12)
    np.testing.assert_allclose(to_ball_model(points), ball, atol=1e-12)


@pytest.mark.slow
def test_dodecahedron_gram(dodecahedron: FullereneGraph, realized_dodecahedron: Realization) -> None:
    r = realized_dodecahedron
    assert r.residual <= 1e-10
    gram = r.gram
    np.testing.assert_allclose(np.diag(gram), 1.0, atol=1e-9)
    pairs = np.array(adjacent_face_pairs(dodecahedron))
    np.testing.assert_allclose(gram[pairs[:, 0], pairs[:, 1]], 0.0, atol=1e-9)

    adjacent = {frozenset(p) for p in pairs.tolist()}
    separated = [
        gram[i, j] for i, j in itertools.combinations(range(12), 2) if frozenset((i, j)) not in adjacent
    ]
    assert max(separated) < -1.0
    # faces at dual distance two, and opposite faces
    assert len(set(np.round(separated, 6))) == 2


@pytest.mark.slow
def test_dodecahedron_vertices(dodecahedron: FullereneGraph, realized_dodecahedron: Realization) -> None:
    r = realized_dodecahedron
    points = r.points
    np.testing.assert_allclose(minkowski_dot(points, points), -1.0, atol=1e-10)
    assert np.all(points[:, 3] > 0)
    lengths = r.edge_lengths(dodecahedron)
    assert np.ptp(lengths) < 1e-8
    assert np.all(np.linalg.norm(r.ball_points(), axis=1) < 1.0)
    center = project_to_hyperboloid(points.sum(axis=0))
    assert np.ptp(hyperbolic_distance(center, points)) < 1e-8


@pytest.mark.slow
def test_extract_vertices_matches_realization(dodecahedron: FullereneGraph, realized_dodecahedron: Realization) -> None:
    points = extract_vertices(realized_dodecahedron.normals, dodecahedron)
    np.testing.assert_allclose(points, realized_dodecahedron.points, atol=1e-9)


@pytest.mark.slow
def test_extract_vertices_rejects_perturbed_normals(
    dodecahedron: FullereneGraph, realized_dodecahedron: Realization
) -> None:
    normals = realized_dodecahedron.normals.copy()
    normals[5, 0] += 1e-3
    with pytest.raises(RealizationError, match="Gram residual"):
        extract_vertices(normals, dodecahedron)


@pytest.mark.slow
def test_realization_export(realized_dodecahedron: Realization) -> None:
    data = realization_to_dict(realized_dodecahedron)
    assert data["n_vertices"] == 20
    assert len(data["face_normals"]) == 12
    assert len(data["vertices_ball"]) == 20
    assert np.asarray(data["gram"]).shape == (12, 12)


def test_cube_is_rejected(cube: FullereneGraph) -> None:
    with pytest.raises(GraphValidationError):
        realize(cube)


def test_no_attempts_left(dodecahedron: FullereneGraph) -> None:
    cfg = SolverConfig(max_iterations=1, homotopy_steps=1, retries=0, tolerance=1e-300)
    with pytest.raises(RealizationError) as info:
        realize(dodecahedron, cfg)
    assert info.value.attempts == 1


@pytest.mark.slow
def test_rigidity_across_seeds() -> None:
    isomers = [*enumerate_isomers(28), *enumerate_isomers(30), *enumerate_isomers(32)][:10]
    assert len(isomers) == 10
    for g in isomers:
        grams = [realize(g, SolverConfig(seed=seed)).gram for seed in range(5)]
        for gram in grams[1:]:
            np.testing.assert_allclose(gram, grams[0], atol=1e-8)
