"""
Face spirals.

A spiral lists the faces of a fullerene so that every face after the second touches the face before it
and the oldest face of the partial patch that still has free edges. Winding a face-size sequence rebuilds
the dual triangulation; unwinding a graph from every start gives its canonical spiral, and a depth-first
windup over face sizes enumerates one graph per isomorphism class.
"""

import re
from collections import deque
from collections.abc import Iterator, Sequence
from typing import NamedTuple

import networkx as nx
from loguru import logger

from hypfull.core.errors import DomainError, SpiralFormatError
from hypfull.graphcore.model import (
    PENTAGON_COUNT,
    FullereneGraph,
    Rotation,
    SpiralCode,
    is_supported_order,
)
from hypfull.graphcore.validation import validate_fullerene

ENUMERATION_MAX = 70

Triangle = tuple[int, int, int]


class _Windup(NamedTuple):
    """Partial patch: open valence per placed face, open boundary (front first), triangle chain."""

    remaining: tuple[int, ...]
    boundary: tuple[int, ...]
    triangles: tuple | None


_EMPTY = _Windup((), (), None)


def _extend(state: _Windup, size: int) -> _Windup | None:
    """Attach the next face to the patch, or None if the patch cannot take it."""
    k = len(state.remaining)
    remaining = [*state.remaining, size]
    if k == 0:
        return _Windup(tuple(remaining), (0,), None)

    linked: list[int] = []

    def link(face: int) -> bool:
        if face in linked:
            return False
        linked.append(face)
        remaining[face] -= 1
        remaining[k] -= 1
        return remaining[face] >= 0 and remaining[k] >= 0

    if k == 1:
        if not link(0):
            return None
        return _Windup(tuple(remaining), (0, 1), None)

    boundary = list(state.boundary)
    front, back = boundary[0], boundary[-1]
    if not (link(back) and link(front)):
        return None
    new = [(front, back, k)]

    while remaining[boundary[0]] == 0:
        closed = boundary.pop(0)
        if not boundary or not link(boundary[0]):
            return None
        new.append((k, closed, boundary[0]))
    while remaining[boundary[-1]] == 0:
        closed = boundary.pop()
        if not boundary or not link(boundary[-1]):
            return None
        new.append((k, boundary[-1], closed))

    if remaining[k] <= 0:
        return None
    boundary.append(k)
    return _Windup(tuple(remaining), tuple(boundary), (tuple(new), state.triangles))


def _close(state: _Windup, size: int) -> list[Triangle] | None:
    """Attach the last face, which must fill the whole remaining boundary."""
    k = len(state.remaining)
    boundary = state.boundary
    if len(boundary) != size or any(state.remaining[face] != 1 for face in boundary):
        return None

    chunks = []
    chain = state.triangles
    while chain is not None:
        chunks.append(chain[0])
        chain = chain[1]
    triangles = [t for chunk in reversed(chunks) for t in chunk]
    triangles.extend((boundary[i], boundary[(i + 1) % size], k) for i in range(size))
    if len(triangles) != 2 * (k + 1) - 4:
        return None
    return triangles


def _orient(triangles: list[Triangle]) -> list[Triangle] | None:
    """Orient all triangles coherently; None if the triangles do not form a closed surface."""
    by_edge: dict[tuple[int, int], list[int]] = {}
    for index, (a, b, c) in enumerate(triangles):
        for x, y in ((a, b), (b, c), (c, a)):
            by_edge.setdefault((min(x, y), max(x, y)), []).append(index)
    if any(len(owners) != 2 for owners in by_edge.values()):  # noqa: PLR2004
        return None

    oriented: list[Triangle | None] = [None] * len(triangles)
    oriented[0] = triangles[0]
    queue = deque([0])
    while queue:
        index = queue.popleft()
        a, b, c = oriented[index]
        for x, y in ((a, b), (b, c), (c, a)):
            owners = by_edge[min(x, y), max(x, y)]
            other = owners[0] if owners[1] == index else owners[1]
            (w,) = set(triangles[other]) - {x, y}
            wanted = (y, x, w)
            if oriented[other] is None:
                oriented[other] = wanted
                queue.append(other)
            elif wanted not in _rotations(oriented[other]):
                return None
    return oriented


def _rotations(t: Triangle) -> tuple[Triangle, Triangle, Triangle]:
    a, b, c = t
    return (a, b, c), (b, c, a), (c, a, b)


def _dual_rotation(n_faces: int, oriented: list[Triangle]) -> Rotation | None:
    successor: list[dict[int, int]] = [{} for _ in range(n_faces)]
    for a, b, c in oriented:
        successor[a][b] = c
        successor[b][c] = a
        successor[c][a] = b

    rotation = []
    for face in range(n_faces):
        following = successor[face]
        if not following:
            return None
        start = min(following)
        order = [start]
        current = following[start]
        while current != start:
            if len(order) > len(following):
                return None
            order.append(current)
            current = following[current]
        if len(order) != len(following):
            return None
        rotation.append(tuple(order))
    return tuple(rotation)


def _primal_rotation(oriented: list[Triangle]) -> Rotation:
    """Each triangle is a vertex; its neighbors are the triangles across its three edges, in order."""
    owner = {}
    for index, (a, b, c) in enumerate(oriented):
        owner[a, b] = owner[b, c] = owner[c, a] = index
    return tuple((owner[b, a], owner[c, b], owner[a, c]) for a, b, c in oriented)


def _face_positions(rotation: Rotation) -> list[dict[int, int]]:
    return [{w: i for i, w in enumerate(nbrs)} for nbrs in rotation]


def _unwind(
    rotation: Rotation,
    position: list[dict[int, int]],
    start: tuple[int, int, int],
    bound: tuple[int, ...] | None,
) -> tuple[int, ...] | None:
    """
    Unwind the faces from a start (first face, second face, direction).

    Returns the face-size sequence if the spiral covers every face and is lexicographically smaller than
    `bound`; the walk stops as soon as the sequence can no longer beat `bound`.
    """
    first, second, step = start
    n_faces = len(rotation)
    visited = bytearray(n_faces)
    remaining = [len(nbrs) for nbrs in rotation]
    sequence: list[int] = []
    smaller = bound is None

    def visit(face: int) -> bool:
        nonlocal smaller
        size = len(rotation[face])
        if not smaller:
            limit = bound[len(sequence)]
            if size > limit:
                return False
            if size < limit:
                smaller = True
        visited[face] = 1
        sequence.append(size)
        for w in rotation[face]:
            remaining[w] -= 1
        return True

    if not (visit(first) and visit(second)):
        return None
    boundary = deque((first, second))
    while len(sequence) < n_faces:
        front, back = boundary[0], boundary[-1]
        index = position[front].get(back)
        if index is None:
            return None
        following = rotation[front][(index + step) % len(rotation[front])]
        if visited[following] or not visit(following):
            return None
        while boundary and remaining[boundary[0]] == 0:
            boundary.popleft()
        while boundary and remaining[boundary[-1]] == 0:
            boundary.pop()
        boundary.append(following)

    return tuple(sequence) if smaller else None


def _starts(rotation: Rotation, faces: Sequence[int]) -> Iterator[tuple[int, int, int]]:
    for first in faces:
        for second in rotation[first]:
            yield first, second, 1
            yield first, second, -1


def _split_by_size(rotation: Rotation) -> tuple[list[int], list[int]]:
    pentagons = [face for face, nbrs in enumerate(rotation) if len(nbrs) == 5]  # noqa: PLR2004
    others = [face for face, nbrs in enumerate(rotation) if len(nbrs) != 5]  # noqa: PLR2004
    return pentagons, others


def canonical_sizes(rotation: Rotation) -> tuple[int, ...] | None:
    """Lexicographically smallest face-size sequence over all spiral starts of a dual rotation."""
    position = _face_positions(rotation)
    best = None
    for group in _split_by_size(rotation):
        for start in _starts(rotation, group):
            sequence = _unwind(rotation, position, start, best)
            if sequence is not None:
                best = sequence
        # a sequence starting with a pentagon beats every hexagon start
        if best is not None:
            return best
    return None


def _is_canonical(rotation: Rotation, candidate: tuple[int, ...]) -> bool:
    position = _face_positions(rotation)
    pentagons, others = _split_by_size(rotation)
    faces = pentagons if candidate[0] == 5 else pentagons + others  # noqa: PLR2004
    return all(_unwind(rotation, position, start, candidate) is None for start in _starts(rotation, faces))


def _build_graph(triangles: list[Triangle], sizes: Sequence[int]) -> tuple[FullereneGraph, Rotation] | None:
    oriented = _orient(triangles)
    if oriented is None:
        return None
    rotation = _dual_rotation(len(sizes), oriented)
    if rotation is None or any(len(nbrs) != size for nbrs, size in zip(rotation, sizes, strict=True)):
        return None
    adjacency = _primal_rotation(oriented)
    graph = FullereneGraph(n_vertices=len(adjacency), adjacency=adjacency)
    return graph, rotation


def wind_spiral(code: SpiralCode) -> FullereneGraph | None:
    """Wind a spiral into a fullerene; None when the spiral does not close."""
    sizes = code.face_sizes
    state = _EMPTY
    for size in sizes[:-1]:
        state = _extend(state, size)
        if state is None:
            logger.debug(f"Spiral {code} does not close: patch cannot take face {len(sizes)}")
            return None
    triangles = _close(state, sizes[-1])
    built = _build_graph(triangles, sizes) if triangles is not None else None
    if built is None:
        logger.debug(f"Spiral {code} does not close")
        return None

    graph, rotation = built
    canonical = canonical_sizes(rotation)
    label = SpiralCode.from_face_sizes(canonical).label() if canonical is not None else code.label()
    graph = graph.model_copy(update={"graph_id": label})
    report = validate_fullerene(graph)
    if not report.passed:
        logger.debug(f"Spiral {code} winds into a non-fullerene: {report.summary()}")
        return None
    return graph


def canonical_spiral(g: FullereneGraph) -> SpiralCode | None:
    """Canonical spiral over all 6N starts in both orientations; None if no start unwinds."""
    sizes = canonical_sizes(g.dual.adjacency)
    if sizes is None:
        logger.warning(f"Graph '{g.graph_id}' has no face spiral")
        return None
    return SpiralCode.from_face_sizes(sizes)


def is_isomorphic(g1: FullereneGraph, g2: FullereneGraph) -> bool:
    """Isomorphism of embedded fullerenes, mirror images identified."""
    if g1.n_vertices != g2.n_vertices or sorted(g1.face_sizes) != sorted(g2.face_sizes):
        return False
    s1, s2 = canonical_spiral(g1), canonical_spiral(g2)
    if s1 is not None and s2 is not None:
        return s1 == s2
    # 3-connected planar graphs embed uniquely up to reflection
    return nx.is_isomorphic(g1.to_networkx(), g2.to_networkx())


def enumerate_isomers(n: int, limit: int | None = None) -> list[FullereneGraph]:
    """
    One fullerene per isomorphism class, sorted by canonical spiral.

    Args:
        n (int): number of vertices, 20 or an even number in 24..70.
        limit (int | None): stop after this many isomers.

    """
    if not is_supported_order(n) or n > ENUMERATION_MAX:
        msg = f"Enumeration supports N = 20 or even N in 24..{ENUMERATION_MAX}, got {n}"
        logger.error(msg)
        raise DomainError(msg)

    n_faces = n // 2 + 2
    n_hexagons = n_faces - PENTAGON_COUNT
    isomers: list[FullereneGraph] = []
    sizes: list[int] = []
    leaves = 0

    def complete(state: _Windup, size: int) -> None:
        nonlocal leaves
        triangles = _close(state, size)
        if triangles is None:
            return
        sequence = (*sizes, size)
        built = _build_graph(triangles, sequence)
        if built is None:
            return
        leaves += 1
        graph, rotation = built
        if _is_canonical(rotation, sequence):
            label = SpiralCode.from_face_sizes(sequence).label()
            isomers.append(graph.model_copy(update={"graph_id": label}))

    def descend(state: _Windup, pentagons: int, hexagons: int) -> None:
        if limit is not None and len(isomers) >= limit:
            return
        last = len(sizes) == n_faces - 1
        for size in (5, 6):
            used_p = pentagons + (size == 5)  # noqa: PLR2004
            used_h = hexagons + (size == 6)  # noqa: PLR2004
            if used_p > PENTAGON_COUNT or used_h > n_hexagons:
                continue
            if last:
                complete(state, size)
                continue
            following = _extend(state, size)
            if following is None:
                continue
            sizes.append(size)
            descend(following, used_p, used_h)
            sizes.pop()

    descend(_EMPTY, 0, 0)
    if limit is not None:
        isomers = isomers[:limit]
    logger.info(f"C{n}: {len(isomers)} isomers from {leaves} closed spirals")
    return isomers


_SPIRAL_LINE = re.compile(r"^\s*(\d+)\s*:\s*(.*)$")


def parse_spiral_text(text: str) -> list[SpiralCode]:
    """Parse lines "N: p1 p2 ... p12"; blank lines and lines starting with '#' are skipped."""
    codes = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        match = _SPIRAL_LINE.match(stripped)
        if match is None:
            msg = f"Line {number}: expected 'N: p1 ... p12', got '{stripped}'"
            logger.error(msg)
            raise SpiralFormatError(msg)
        try:
            positions = tuple(int(token) for token in re.split(r"[\s,]+", match.group(2).strip()) if token)
        except ValueError as e:
            msg = f"Line {number}: non-integer pentagon position in '{stripped}'"
            logger.error(msg)
            raise SpiralFormatError(msg) from e
        try:
            codes.append(SpiralCode(n_vertices=int(match.group(1)), pentagon_positions=positions))
        except SpiralFormatError as e:
            msg = f"Line {number}: {e!s}"
            logger.error(msg)
            raise SpiralFormatError(msg) from e
    return codes


def format_spiral(code: SpiralCode) -> str:
    return str(code)
