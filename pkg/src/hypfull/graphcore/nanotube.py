from loguru import logger

from hypfull.core.errors import DomainError, InternalAssertionError
from hypfull.graphcore.model import FullereneGraph, SpiralCode
from hypfull.graphcore.spiral import wind_spiral


def nanotube_a_spiral(k: int) -> SpiralCode:
    """Spiral of k stacked dodecahedra: a pentagon cap, 5(k-1) hexagons, a pentagon cap."""
    n_faces = 5 * k + 7
    caps = (*range(1, 7), *range(n_faces - 5, n_faces + 1))
    return SpiralCode(n_vertices=10 * (k + 1), pentagon_positions=caps)


def nanotube_a(k: int) -> FullereneGraph:
    """
    Nanotubical fullerene with two type-(a) caps glued from k copies of C20.

    Args:
        k (int): number of stacked dodecahedra, k >= 1; k = 1 is the dodecahedron.

    Returns:
        FullereneGraph: the fullerene with N = 10(k+1) vertices and 5(k-1) hexagons.

    """
    if k < 1:
        msg = f"Nanotube stack count must be at least 1, got {k}"
        logger.error(msg)
        raise DomainError(msg)

    code = nanotube_a_spiral(k)
    graph = wind_spiral(code)
    if graph is None:
        msg = f"Nanotube spiral {code} did not close"
        logger.error(msg)
        raise InternalAssertionError(msg)
    return graph
