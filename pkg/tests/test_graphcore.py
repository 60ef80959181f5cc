from collections import Counter

import pytest

from hypfull.core.errors import DomainError, PlanarCodeError, SpiralFormatError
from hypfull.graphcore.model import FullereneGraph, SpiralCode, build_dual, trace_faces
from hypfull.graphcore.nanotube import nanotube_a
from hypfull.graphcore.planar_code import PLANAR_CODE_HEADER, parse_planar_code, write_planar_code
from hypfull.graphcore.spiral import (
    canonical_spiral,
    enumerate_isomers,
    format_spiral,
    is_isomorphic,
    parse_spiral_text,
    wind_spiral,
)
from hypfull.graphcore.validation import validate_fullerene
from hypfull.indices.signatures import np_index


def test_dodecahedron_faces(dodecahedron: FullereneGraph) -> None:
    faces = trace_faces(dodecahedron.adjacency)
    assert len(faces) == 12
    assert all(len(face) == 5 for face in faces)


def test_c60_faces(c60: FullereneGraph) -> None:
    counts = Counter(c60.face_sizes)
    assert counts == {5: 12, 6: 20}
    assert c60.n_faces == 60 // 2 + 2


def test_face_sizes_sum_to_three_n(c24: FullereneGraph, c60: FullereneGraph) -> None:
    for g in (c24, c60):
        assert sum(g.face_sizes) == 3 * g.n_vertices


def test_every_directed_edge_in_one_face(c26: FullereneGraph) -> None:
    directed = Counter((face[i], face[(i + 1) % len(face)]) for face in c26.faces for i in range(len(face)))
    assert len(directed) == 3 * c26.n_vertices
    assert set(directed.values()) == {1}


def test_validate_dodecahedron(dodecahedron: FullereneGraph) -> None:
    report = validate_fullerene(dodecahedron)
    assert report.passed
    report.raise_for_failures()


def test_validate_cube_reports_square_faces(cube: FullereneGraph) -> None:
    report = validate_fullerene(cube)
    assert not report.passed
    assert "face of size 4" in report.summary()
    assert "odd/invalid vertex count" in report.summary()


def test_validate_corrupted_rotation(dodecahedron: FullereneGraph) -> None:
    adjacency = list(dodecahedron.adjacency)
    a, b, c = adjacency[0]
    adjacency[0] = (b, a, c)
    corrupted = FullereneGraph(n_vertices=20, adjacency=tuple(adjacency), graph_id="corrupted")
    report = validate_fullerene(corrupted)
    assert not report.passed
    assert {check.name for check in report.failures} & {"euler", "pentagon_count", "face_sizes"}


def test_dual_of_dodecahedron_is_icosahedron(dodecahedron: FullereneGraph) -> None:
    dual = build_dual(dodecahedron)
    assert dual.n_faces == 12
    assert dual.n_edges == 30
    assert set(dual.degree) == {5}


def test_dual_of_c24(c24: FullereneGraph) -> None:
    dual = c24.dual
    assert dual.n_faces == 14
    assert Counter(dual.degree) == {5: 12, 6: 2}


def test_dual_edge_count(c60: FullereneGraph) -> None:
    assert c60.dual.n_edges == 3 * 60 // 2


def test_wind_c60_is_ipr(c60: FullereneGraph) -> None:
    assert validate_fullerene(c60).passed
    assert np_index(c60) == 0


def test_spiral_that_closes_early() -> None:
    assert wind_spiral(SpiralCode(n_vertices=24, pentagon_positions=tuple(range(1, 13)))) is None


def test_spiral_code_rejects_odd_order() -> None:
    with pytest.raises(SpiralFormatError):
        SpiralCode(n_vertices=19, pentagon_positions=tuple(range(1, 13)))


@pytest.mark.parametrize(("n", "count"), [(20, 1), (24, 1), (26, 1), (28, 2), (30, 3), (32, 6), (34, 6)])
def test_enumeration_counts(n: int, count: int) -> None:
    assert len(enumerate_isomers(n)) == count


@pytest.mark.slow
@pytest.mark.parametrize(("n", "count"), [(36, 15), (38, 17), (40, 40), (42, 45), (44, 89)])
def test_enumeration_counts_up_to_44(n: int, count: int) -> None:
    isomers = enumerate_isomers(n)
    assert len(isomers) == count
    assert len({g.graph_id for g in isomers}) == count


def test_enumeration_sorted_and_canonical() -> None:
    isomers = enumerate_isomers(32)
    spirals = [canonical_spiral(g) for g in isomers]
    assert [s.pentagon_positions for s in spirals] == sorted(s.pentagon_positions for s in spirals)
    assert [g.graph_id for g in isomers] == [s.label() for s in spirals]


def test_enumeration_limit() -> None:
    assert len(enumerate_isomers(32, limit=2)) == 2


def test_enumeration_out_of_range() -> None:
    with pytest.raises(DomainError):
        enumerate_isomers(22)
    with pytest.raises(DomainError):
        enumerate_isomers(72)


@pytest.mark.parametrize(("k", "hexagons"), [(1, 0), (2, 5), (3, 10)])
def test_nanotube_a(k: int, hexagons: int) -> None:
    g = nanotube_a(k)
    assert g.n_vertices == 10 * (k + 1)
    assert len(g.hexagons) == hexagons
    assert len(g.pentagons) == 12
    assert validate_fullerene(g).passed


def test_nanotube_a_rejects_zero() -> None:
    with pytest.raises(DomainError):
        nanotube_a(0)


def test_isomorphism(dodecahedron: FullereneGraph, c28_pair: list[FullereneGraph]) -> None:
    assert is_isomorphic(dodecahedron, nanotube_a(1))
    first, second = c28_pair
    assert not is_isomorphic(first, second)
    assert is_isomorphic(first, first.mirror())


def test_mirror_traces_its_own_faces(c28_pair: list[FullereneGraph]) -> None:
    g = c28_pair[0]
    # populate the cached faces and dual of the original first
    _ = (g.faces, g.face_of_edge, g.vertex_faces, g.dual)
    mirrored = g.mirror()
    assert mirrored.faces == trace_faces(mirrored.adjacency)
    assert mirrored.faces != g.faces
    assert mirrored.dual == build_dual(mirrored)
    assert sorted(mirrored.face_sizes) == sorted(g.face_sizes)
    assert validate_fullerene(mirrored).passed


@pytest.mark.parametrize("n", [20, 24, 26, 28, 30, 32])
def test_spiral_round_trip(n: int) -> None:
    for g in enumerate_isomers(n):
        code = canonical_spiral(g)
        assert code is not None
        assert is_isomorphic(wind_spiral(code), g)
        assert canonical_spiral(g.mirror()) == code


@pytest.mark.slow
@pytest.mark.parametrize("n", range(34, 46, 2))
def test_spiral_round_trip_up_to_44(n: int) -> None:
    for g in enumerate_isomers(n):
        assert is_isomorphic(wind_spiral(canonical_spiral(g)), g)


def test_canonical_spiral_of_relabelled_graph(c60: FullereneGraph) -> None:
    relabelled = parse_planar_code(write_planar_code([c60.mirror()]), source="mirror")[0]
    assert canonical_spiral(relabelled) == canonical_spiral(c60)
    assert canonical_spiral(c60).pentagon_positions == (1, 7, 9, 11, 13, 15, 18, 20, 22, 24, 26, 32)


def test_planar_code_dodecahedron(dodecahedron: FullereneGraph) -> None:
    data = write_planar_code([dodecahedron])
    assert data.startswith(PLANAR_CODE_HEADER)
    assert len(data) == len(PLANAR_CODE_HEADER) + 1 + 60 + 20
    graphs = parse_planar_code(data, source="dodeca")
    assert len(graphs) == 1
    assert graphs[0].n_vertices == 20
    assert len(graphs[0].pentagons) == 12
    assert graphs[0].graph_id == "dodeca#1"


def test_planar_code_empty_stream() -> None:
    assert parse_planar_code(PLANAR_CODE_HEADER) == []


def test_planar_code_invalid_order() -> None:
    with pytest.raises(PlanarCodeError, match="odd/invalid vertex count"):
        parse_planar_code(PLANAR_CODE_HEADER + bytes([19]))


def test_planar_code_truncated(dodecahedron: FullereneGraph) -> None:
    data = write_planar_code([dodecahedron])
    with pytest.raises(PlanarCodeError, match="truncated"):
        parse_planar_code(data[:-5])


def test_planar_code_unsupported_variant() -> None:
    with pytest.raises(PlanarCodeError, match="unsupported"):
        parse_planar_code(b">>planar_code le<<")


def test_spiral_text() -> None:
    text = "# two isomers\n\n20: 1 2 3 4 5 6 7 8 9 10 11 12\n60: 1,7,9,11,13,15,18,20,22,24,26,32\n"
    codes = parse_spiral_text(text)
    assert [code.n_vertices for code in codes] == [20, 60]
    assert format_spiral(codes[0]) == "20: 1 2 3 4 5 6 7 8 9 10 11 12"


def test_spiral_text_bad_line() -> None:
    with pytest.raises(SpiralFormatError, match="Line 2"):
        parse_spiral_text("20: 1 2 3 4 5 6 7 8 9 10 11 12\nnot a spiral\n")
