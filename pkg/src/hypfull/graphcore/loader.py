from pathlib import Path

from loguru import logger

from hypfull.core.errors import SpiralFormatError
from hypfull.graphcore.model import FullereneGraph
from hypfull.graphcore.planar_code import PLANAR_CODE_HEADER, parse_planar_code, read_planar_code
from hypfull.graphcore.spiral import parse_spiral_text, wind_spiral

SPIRAL_SUFFIXES = {".txt", ".spiral", ".spirals"}


def load_graphs(path: Path) -> list[FullereneGraph]:
    """Load fullerenes from a planar_code file or a spiral text file (one "N: p1 ... p12" per line)."""
    if path.suffix.lower() not in SPIRAL_SUFFIXES:
        return read_planar_code(path)

    data = path.read_bytes()
    if data.startswith(PLANAR_CODE_HEADER):
        return parse_planar_code(data, source=path.name)

    graphs = []
    for code in parse_spiral_text(data.decode("utf-8")):
        graph = wind_spiral(code)
        if graph is None:
            msg = f"{path.name}: spiral '{code}' does not close"
            logger.error(msg)
            raise SpiralFormatError(msg)
        graphs.append(graph)
    logger.debug(f"{path.name}: wound {len(graphs)} graphs from spirals")
    return graphs


def load_many(paths: list[Path]) -> list[FullereneGraph]:
    graphs = []
    for path in paths:
        graphs.extend(load_graphs(path))
    return graphs
