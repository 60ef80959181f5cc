import math

import numpy as np
import pytest
from scipy.integrate import tplquad

from hypfull.core.errors import DomainError
from hypfull.graphcore.model import FullereneGraph
from hypfull.graphcore.nanotube import nanotube_a
from hypfull.graphcore.spiral import enumerate_isomers
from hypfull.hypfun.bounds import sphericity_denominator
from hypfull.hypfun.lobachevsky import dodecahedron_volume_closed_form
from hypfull.realize.minkowski import lorentz_boost
from hypfull.realize.solver import Realization
from hypfull.volume.polyhedron import decompose, polyhedron_volume, sphericity
from hypfull.volume.tetrahedron import Tetrahedron, tetra_volume, tetra_volumes


def from_klein(points: np.ndarray) -> np.ndarray:
    k = np.asarray(points, dtype=float)
    scale = 1.0 / np.sqrt(1.0 - np.sum(k * k, axis=-1, keepdims=True))
    return np.concatenate([k, np.ones((*k.shape[:-1], 1))], axis=-1) * scale


def klein_quadrature(points: np.ndarray) -> float:
    """Integral of the Klein volume density (1 - |x|^2)^-2 over a Euclidean tetrahedron."""
    p0, p1, p2, p3 = np.asarray(points, dtype=float)
    edges = np.column_stack([p1 - p0, p2 - p0, p3 - p0])
    jacobian = abs(np.linalg.det(edges))

    def density(w: float, v: float, u: float) -> float:
        x = p0 + edges @ np.array([u, v, w])
        return 1.0 / (1.0 - x @ x) ** 2

    value, _ = tplquad(
        density, 0, 1, lambda _: 0, lambda u: 1 - u, lambda *_: 0, lambda u, v: 1 - u - v, epsabs=1e-11, epsrel=1e-10
    )
    return value * jacobian


KLEIN_TETRAHEDRA = [
    np.array([[0.0, 0.0, 0.0], [0.4, 0.0, 0.0], [0.0, 0.4, 0.0], [0.0, 0.0, 0.4]]),
    np.array([[0.1, -0.2, 0.05], [0.6, 0.1, -0.1], [-0.3, 0.5, 0.2], [0.05, 0.1, -0.7]]),
    np.array([[-0.5, -0.5, 0.1], [0.6, -0.4, 0.0], [0.0, 0.7, -0.2], [0.1, 0.0, 0.8]]),
]


@pytest.mark.parametrize("klein", KLEIN_TETRAHEDRA)
def test_tetrahedron_against_quadrature(klein: np.ndarray) -> None:
    volume = tetra_volume(Tetrahedron(*from_klein(klein)))
    assert abs(volume) == pytest.approx(klein_quadrature(klein), rel=1e-7)


def test_tetrahedron_isometry_invariance() -> None:
    vertices = from_klein(KLEIN_TETRAHEDRA[1])
    moved = vertices @ lorentz_boost([0.4, 0.2, -0.3]).T
    volumes, degenerate = tetra_volumes(np.stack([vertices, moved]))
    assert not degenerate.any()
    assert volumes[0] == pytest.approx(volumes[1], rel=1e-10)


def test_degenerate_tetrahedron() -> None:
    a, b, c, _ = from_klein(KLEIN_TETRAHEDRA[0])
    assert tetra_volume(Tetrahedron(a, b, c, a)) == 0.0
    volumes, degenerate = tetra_volumes(np.stack([[a, b, c, b], from_klein(KLEIN_TETRAHEDRA[0])]))
    assert degenerate.tolist() == [True, False]
    assert volumes[0] == 0.0


def test_sphericity_needs_positive_volume() -> None:
    with pytest.raises(DomainError):
        sphericity(0.0, 20)


@pytest.mark.slow
def test_dodecahedron_volume(dodecahedron: FullereneGraph, realized_dodecahedron: Realization) -> None:
    report = polyhedron_volume(dodecahedron, realization=realized_dodecahedron)
    assert report.volume == pytest.approx(4.306208, abs=1e-6)
    assert report.volume == pytest.approx(dodecahedron_volume_closed_form(), abs=1e-8)
    assert report.volume_rounded == 4.306208
    assert report.tetra_count == 60
    assert report.degenerate_tetrahedra == 0
    assert report.decomposition_residual < 1e-7
    assert report.sphericity == pytest.approx(4.306208 / sphericity_denominator(20), abs=1e-6)
    assert report.area == pytest.approx(6 * math.pi)
    assert report.sandwich.holds()


@pytest.mark.slow
def test_dodecahedron_decomposition(dodecahedron: FullereneGraph, realized_dodecahedron: Realization) -> None:
    tets = decompose(realized_dodecahedron, dodecahedron)
    assert len(tets) == 60
    volumes, _ = tetra_volumes(np.stack([t.as_array() for t in tets]))
    assert np.all(volumes > 0)
    # all sixty pieces are congruent
    assert np.ptp(volumes) < 1e-9


@pytest.mark.slow
@pytest.mark.parametrize(("fixture", "expected"), [("c24", 6.023046), ("c26", 6.967011)])
def test_small_fullerene_volumes(fixture: str, expected: float, request: pytest.FixtureRequest) -> None:
    g = request.getfixturevalue(fixture)
    report = polyhedron_volume(g)
    assert report.volume == pytest.approx(expected, abs=1e-6)
    assert report.sandwich.holds()


@pytest.mark.slow
def test_c28_volumes(c28_pair: list[FullereneGraph]) -> None:
    volumes = sorted(polyhedron_volume(g).volume for g in c28_pair)
    assert volumes == pytest.approx([7.869948, 8.000234], abs=1e-6)
    # volume grows with the number of vertices
    assert volumes[0] > 6.967011 > 6.023046 > 4.306208


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(20))
def test_random_tetrahedra_against_quadrature(seed: int) -> None:
    rng = np.random.default_rng(seed)
    directions = rng.normal(size=(4, 3))
    klein = directions / np.linalg.norm(directions, axis=1, keepdims=True) * rng.uniform(0.1, 0.7, size=(4, 1))
    volume = tetra_volume(Tetrahedron(*from_klein(klein)))
    assert abs(volume) == pytest.approx(klein_quadrature(klein), abs=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize("k", [2, 3])
def test_nanotube_volume_is_stacked_dodecahedra(k: int) -> None:
    report = polyhedron_volume(nanotube_a(k))
    assert report.volume == pytest.approx(k * dodecahedron_volume_closed_form(), abs=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize("n", [20, *range(24, 46, 2)])
def test_bound_sandwich_and_sphericity(n: int) -> None:
    for g in enumerate_isomers(n):
        report = polyhedron_volume(g)
        assert report.sandwich.holds(), report.sandwich
        assert 0.0 < report.sphericity < 1.0
