"""
planar_code reader and writer.

Layout: optional header ">>planar_code<<", then per graph one octet N followed by the neighbors of
vertices 1..N in rotation order, each list terminated by a 0 octet. Only the single-octet variant (N < 256)
is supported.
"""

from collections.abc import Iterable
from pathlib import Path

from loguru import logger
from pydantic import ValidationError

from hypfull.core.errors import DomainError, PlanarCodeError
from hypfull.graphcore.model import FullereneGraph, is_supported_order

PLANAR_CODE_HEADER = b">>planar_code<<"
MAX_SINGLE_OCTET = 255


def _fail(msg: str) -> PlanarCodeError:
    logger.error(msg)
    return PlanarCodeError(msg)


def parse_planar_code(data: bytes, source: str = "stream") -> list[FullereneGraph]:
    """Parse every graph of a planar_code stream, keeping the rotation exactly as read."""
    offset = len(PLANAR_CODE_HEADER) if data.startswith(PLANAR_CODE_HEADER) else 0
    if offset == 0 and data.startswith(b">>planar_code"):
        msg = f"{source}: unsupported planar_code variant {data[: data.find(b'<<') + 2]!r}"
        raise _fail(msg)

    graphs: list[FullereneGraph] = []
    index = 0
    while offset < len(data):
        index += 1
        n = data[offset]
        offset += 1
        if n == 0:
            msg = f"{source}: graph {index} uses multi-octet vertex numbers, which are not supported"
            raise _fail(msg)
        if not is_supported_order(n):
            msg = f"{source}: graph {index} has odd/invalid vertex count {n}"
            raise _fail(msg)

        adjacency = []
        for v in range(n):
            nbrs = []
            while True:
                if offset >= len(data):
                    msg = f"{source}: truncated stream in graph {index} at vertex {v + 1}"
                    raise _fail(msg)
                octet = data[offset]
                offset += 1
                if octet == 0:
                    break
                if octet > n:
                    msg = f"{source}: graph {index} vertex {v + 1} has neighbor {octet} out of range 1..{n}"
                    raise _fail(msg)
                nbrs.append(octet - 1)
            if len(nbrs) != 3:  # noqa: PLR2004
                msg = f"{source}: graph {index} vertex {v + 1} has degree {len(nbrs)}, expected 3"
                raise _fail(msg)
            adjacency.append(tuple(nbrs))

        try:
            graphs.append(FullereneGraph(n_vertices=n, adjacency=tuple(adjacency), graph_id=f"{source}#{index}"))
        except ValidationError as e:
            msg = f"{source}: graph {index} has an inconsistent rotation system: {e.errors()[0]['msg']}"
            logger.error(msg)
            raise PlanarCodeError(msg) from e

    logger.debug(f"{source}: parsed {len(graphs)} graphs from planar_code")
    return graphs


def write_planar_code(graphs: Iterable[FullereneGraph], *, header: bool = True) -> bytes:
    out = bytearray(PLANAR_CODE_HEADER if header else b"")
    for g in graphs:
        if g.n_vertices > MAX_SINGLE_OCTET:
            msg = f"Graph '{g.graph_id}' has {g.n_vertices} vertices; single-octet planar_code holds at most 255"
            logger.error(msg)
            raise DomainError(msg)
        out.append(g.n_vertices)
        for nbrs in g.adjacency:
            out.extend(w + 1 for w in nbrs)
            out.append(0)
    return bytes(out)


def read_planar_code(path: Path) -> list[FullereneGraph]:
    try:
        data = path.read_bytes()
    except OSError as e:
        msg = f"Cannot read planar_code file {path}: {e!s}"
        logger.error(msg)
        raise PlanarCodeError(msg) from e
    return parse_planar_code(data, source=path.name)


def save_planar_code(path: Path, graphs: Iterable[FullereneGraph]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(write_planar_code(graphs))
