import networkx as nx

from hypfull.graphcore.model import FullereneGraph


def _neighbor_signature(g: FullereneGraph, size: int) -> tuple[int, ...]:
    dual = g.dual
    counts = [0] * (size + 1)
    for face, degree in enumerate(dual.degree):
        if degree == size:
            counts[sum(1 for w in dual.adjacency[face] if dual.degree[w] == size)] += 1
    return tuple(counts)


def pentagon_signature(g: FullereneGraph) -> tuple[int, ...]:
    """(p0, ..., p5): p_k pentagons have exactly k pentagonal neighbors."""
    return _neighbor_signature(g, 5)


def hexagon_signature(g: FullereneGraph) -> tuple[int, ...]:
    """(h0, ..., h6): h_k hexagons have exactly k hexagonal neighbors."""
    return _neighbor_signature(g, 6)


def second_moment(signature: tuple[int, ...]) -> int:
    return sum(k * k * count for k, count in enumerate(signature))


def np_index(g: FullereneGraph) -> int:
    """Number of adjacent pentagon pairs."""
    return sum(k * count for k, count in enumerate(pentagon_signature(g))) // 2


def h5(g: FullereneGraph) -> int:
    return second_moment(pentagon_signature(g))


def h6(g: FullereneGraph) -> int:
    return second_moment(hexagon_signature(g))


def pentagon_components(g: FullereneGraph) -> int:
    """Connected components of the pentagon-induced subgraph of the dual."""
    dual = g.dual
    pentagons = set(dual.pentagons)
    graph = nx.Graph()
    graph.add_nodes_from(pentagons)
    graph.add_edges_from((p, w) for p in pentagons for w in dual.adjacency[p] if w in pentagons)
    return nx.number_connected_components(graph)
