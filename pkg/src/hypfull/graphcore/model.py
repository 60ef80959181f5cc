from functools import cached_property

import networkx as nx
from loguru import logger
from pydantic import BaseModel, ConfigDict, model_validator

from hypfull.core.errors import GraphValidationError, SpiralFormatError

PENTAGON_COUNT = 12

Rotation = tuple[tuple[int, ...], ...]


def is_supported_order(n: int) -> bool:
    """Fullerenes exist for N = 20 and every even N >= 24."""
    return n == 20 or (n >= 24 and n % 2 == 0)  # noqa: PLR2004


def trace_faces(adjacency: Rotation) -> tuple[tuple[int, ...], ...]:
    """
    Trace the faces of an embedded graph given by its rotation system.

    From the directed edge u -> v the face continues with v -> w, where w is the neighbor of v
    next clockwise after u (neighbor lists are counterclockwise). Directed edges are visited in
    lexicographic order so the face order is deterministic.
    """
    position = [{w: i for i, w in enumerate(nbrs)} for nbrs in adjacency]
    visited: set[tuple[int, int]] = set()
    faces: list[tuple[int, ...]] = []

    for u in range(len(adjacency)):
        for v in sorted(adjacency[u]):
            if (u, v) in visited:
                continue
            face: list[int] = []
            a, b = u, v
            while (a, b) not in visited:
                visited.add((a, b))
                face.append(a)
                back = position[b].get(a)
                if back is None:
                    msg = f"Face tracing does not close: edge {a}->{b} has no reverse edge"
                    logger.error(msg)
                    raise GraphValidationError(msg)
                a, b = b, adjacency[b][(back - 1) % len(adjacency[b])]
            if (a, b) != (u, v):
                msg = f"Face tracing does not close at directed edge {u}->{v}"
                logger.error(msg)
                raise GraphValidationError(msg)
            faces.append(tuple(face))
    return tuple(faces)


class DualGraph(BaseModel):
    """Dual of an embedded fullerene: one vertex per face, rotation inherited from the face traversal."""

    model_config = ConfigDict(frozen=True)

    n_faces: int
    adjacency: Rotation
    degree: tuple[int, ...]

    @property
    def pentagons(self) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.degree) if d == 5)  # noqa: PLR2004

    @property
    def hexagons(self) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.degree) if d == 6)  # noqa: PLR2004

    @property
    def n_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def is_simple(self) -> bool:
        return all(len(set(nbrs)) == len(nbrs) and i not in nbrs for i, nbrs in enumerate(self.adjacency))


class FullereneGraph(BaseModel):
    """
    Cubic plane graph given by a rotation system.

    Attributes:
        n_vertices (int): number of vertices N.
        adjacency (Rotation): per-vertex neighbor tuple in counterclockwise order, 0-based.
        graph_id (str): stable identifier, "C{N}:{spiral}" or "{source}#{index}".

    """

    model_config = ConfigDict(frozen=True)

    n_vertices: int
    adjacency: Rotation
    graph_id: str = ""

    @model_validator(mode="after")
    def check_rotation(self) -> "FullereneGraph":
        if len(self.adjacency) != self.n_vertices:
            msg = f"Graph '{self.graph_id}': {len(self.adjacency)} neighbor lists for {self.n_vertices} vertices"
            raise ValueError(msg)
        for v, nbrs in enumerate(self.adjacency):
            for w in nbrs:
                if not 0 <= w < self.n_vertices or w == v:
                    msg = f"Graph '{self.graph_id}': vertex {v} has invalid neighbor {w}"
                    raise ValueError(msg)
                if v not in self.adjacency[w]:
                    msg = f"Graph '{self.graph_id}': edge {v}-{w} is not symmetric"
                    raise ValueError(msg)
        return self

    @cached_property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        return trace_faces(self.adjacency)

    @property
    def face_sizes(self) -> tuple[int, ...]:
        return tuple(len(face) for face in self.faces)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def pentagons(self) -> tuple[int, ...]:
        return tuple(i for i, size in enumerate(self.face_sizes) if size == 5)  # noqa: PLR2004

    @property
    def hexagons(self) -> tuple[int, ...]:
        return tuple(i for i, size in enumerate(self.face_sizes) if size == 6)  # noqa: PLR2004

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v)

    @cached_property
    def face_of_edge(self) -> dict[tuple[int, int], int]:
        """Face lying on the traversal side of each directed edge."""
        mapping: dict[tuple[int, int], int] = {}
        for index, face in enumerate(self.faces):
            for i, u in enumerate(face):
                mapping[u, face[(i + 1) % len(face)]] = index
        return mapping

    @cached_property
    def vertex_faces(self) -> tuple[tuple[int, ...], ...]:
        """Faces around each vertex, in rotation order."""
        return tuple(
            tuple(self.face_of_edge[v, w] for w in nbrs) for v, nbrs in enumerate(self.adjacency)
        )

    @cached_property
    def dual(self) -> DualGraph:
        return build_dual(self)

    def mirror(self) -> "FullereneGraph":
        """Same graph with every rotation reversed; faces and dual are traced anew."""
        return FullereneGraph(
            n_vertices=self.n_vertices,
            adjacency=tuple(tuple(reversed(nbrs)) for nbrs in self.adjacency),
            graph_id=self.graph_id,
        )

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n_vertices))
        graph.add_edges_from(self.edges)
        return graph


def build_dual(g: FullereneGraph) -> DualGraph:
    """Faces become vertices; neighbors are listed along the face boundary, which keeps a consistent rotation."""
    adjacency = []
    for face in g.faces:
        nbrs = tuple(g.face_of_edge[face[(i + 1) % len(face)], u] for i, u in enumerate(face))
        adjacency.append(nbrs)
    dual = DualGraph(n_faces=len(g.faces), adjacency=tuple(adjacency), degree=tuple(len(f) for f in g.faces))
    logger.debug(f"Graph '{g.graph_id}': dual with {dual.n_faces} vertices and {dual.n_edges} edges")
    return dual


class SpiralCode(BaseModel):
    """Face spiral: 1-based positions of the 12 pentagons among the N/2 + 2 faces."""

    model_config = ConfigDict(frozen=True)

    n_vertices: int
    pentagon_positions: tuple[int, ...]

    @model_validator(mode="after")
    def check_positions(self) -> "SpiralCode":
        if not is_supported_order(self.n_vertices):
            msg = f"No fullerene with {self.n_vertices} vertices (odd/invalid vertex count)"
            raise SpiralFormatError(msg)
        positions = self.pentagon_positions
        if len(positions) != PENTAGON_COUNT:
            msg = f"Spiral needs {PENTAGON_COUNT} pentagon positions, got {len(positions)}"
            raise SpiralFormatError(msg)
        if any(b <= a for a, b in zip(positions, positions[1:], strict=False)):
            msg = f"Pentagon positions must be strictly increasing: {positions}"
            raise SpiralFormatError(msg)
        if positions[0] < 1 or positions[-1] > self.n_faces:
            msg = f"Pentagon positions must lie in 1..{self.n_faces}: {positions}"
            raise SpiralFormatError(msg)
        return self

    @property
    def n_faces(self) -> int:
        return self.n_vertices // 2 + 2

    @property
    def face_sizes(self) -> tuple[int, ...]:
        pentagons = set(self.pentagon_positions)
        return tuple(5 if i + 1 in pentagons else 6 for i in range(self.n_faces))

    @classmethod
    def from_face_sizes(cls, sizes: tuple[int, ...] | list[int]) -> "SpiralCode":
        n_vertices = 2 * (len(sizes) - 2)
        return cls(n_vertices=n_vertices, pentagon_positions=tuple(i + 1 for i, s in enumerate(sizes) if s == 5))  # noqa: PLR2004

    def label(self) -> str:
        return f"C{self.n_vertices}:" + ",".join(str(p) for p in self.pentagon_positions)

    def __str__(self) -> str:
        return f"{self.n_vertices}: " + " ".join(str(p) for p in self.pentagon_positions)
