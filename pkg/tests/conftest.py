import os
from pathlib import Path

import pytest

from hypfull.core.config.run import RunConfig, SolverConfig
from hypfull.core.settings import settings
from hypfull.graphcore.model import FullereneGraph, SpiralCode
from hypfull.graphcore.spiral import enumerate_isomers, wind_spiral
from hypfull.realize.solver import Realization, realize

C60_IH_SPIRAL = (1, 7, 9, 11, 13, 15, 18, 20, 22, 24, 26, 32)

# planar drawing of the cube, neighbors counterclockwise
CUBE_ROTATION = ((1, 4, 3), (2, 5, 0), (3, 6, 1), (2, 0, 7), (5, 7, 0), (6, 4, 1), (2, 7, 5), (6, 3, 4))


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption("--long", action="store_true", default=False, help="run the long reproduction suite")


def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]) -> None:
    enabled = config.getoption("--long") or settings.long_suite or os.environ.get("HYPFULL_LONG_SUITE") == "1"
    if enabled:
        return
    skip = pytest.mark.skip(reason="long suite: use --long or HYPFULL_LONG_SUITE=1")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


def wound(n: int, positions: tuple[int, ...]) -> FullereneGraph:
    graph = wind_spiral(SpiralCode(n_vertices=n, pentagon_positions=positions))
    assert graph is not None
    return graph


@pytest.fixture(autouse=True)
def tmp_cache(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Every test gets its own empty results cache."""
    cache_dir = tmp_path / "cache"
    monkeypatch.setattr(settings, "cache_dir", cache_dir)
    return cache_dir


@pytest.fixture(scope="session")
def dodecahedron() -> FullereneGraph:
    return wound(20, tuple(range(1, 13)))


@pytest.fixture(scope="session")
def c24() -> FullereneGraph:
    return enumerate_isomers(24)[0]


@pytest.fixture(scope="session")
def c26() -> FullereneGraph:
    return enumerate_isomers(26)[0]


@pytest.fixture(scope="session")
def c28_pair() -> list[FullereneGraph]:
    return enumerate_isomers(28)


@pytest.fixture(scope="session")
def c60() -> FullereneGraph:
    return wound(60, C60_IH_SPIRAL)


@pytest.fixture(scope="session")
def cube() -> FullereneGraph:
    return FullereneGraph(n_vertices=8, adjacency=CUBE_ROTATION, graph_id="cube")


@pytest.fixture(scope="session")
def solver_config() -> SolverConfig:
    return SolverConfig()


@pytest.fixture(scope="session")
def realized_dodecahedron(dodecahedron: FullereneGraph, solver_config: SolverConfig) -> Realization:
    return realize(dodecahedron, solver_config)


@pytest.fixture
def run_config() -> RunConfig:
    return RunConfig(n_min=20, n_max=28)
