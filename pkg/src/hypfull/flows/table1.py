from typing import Any

from loguru import logger
from pydantic import BaseModel

from hypfull.core.cache import ResultCache
from hypfull.core.config.run import ENUMERATION_MAX, ENUMERATION_MIN, RunConfig
from hypfull.core.errors import DomainError
from hypfull.flows.base import BaseFlow, BaseFlowInput, BaseGraphState
from hypfull.flows.descriptors import IsomerResult, solve_isomers
from hypfull.graphcore.model import FullereneGraph, is_supported_order
from hypfull.graphcore.spiral import enumerate_isomers
from hypfull.stats.table import distinct_count


class Table1Row(BaseModel):
    N: int
    isomers: int
    distinct_volumes: int
    min_volume: float | None = None
    max_volume: float | None = None
    min_id: str | None = None
    max_id: str | None = None

    def formatted(self, precision: int = 6) -> dict[str, str]:
        def fmt(value: float | None) -> str:
            return "" if value is None else f"{value:.{precision}f}"

        return {
            "N": str(self.N),
            "isomers": str(self.isomers),
            "distinct": str(self.distinct_volumes),
            "min": fmt(self.min_volume),
            "max": fmt(self.max_volume),
        }


def aggregate_row(n: int, results: list[IsomerResult], precision: int = 6) -> Table1Row:
    if not results:
        return Table1Row(N=n, isomers=0, distinct_volumes=0)
    ordered = sorted(results, key=lambda r: (r.entry.volume.volume, r.source_id))
    return Table1Row(
        N=n,
        isomers=len(results),
        distinct_volumes=distinct_count((r.entry.volume.volume for r in results), precision),
        min_volume=ordered[0].entry.volume.volume,
        max_volume=ordered[-1].entry.volume.volume,
        min_id=ordered[0].source_id,
        max_id=ordered[-1].source_id,
    )


class Table1Input(BaseFlowInput):
    n_min: int
    n_max: int


class Table1State(BaseGraphState):
    n_min: int
    n_max: int
    graphs: dict[int, list[FullereneGraph]] = {}
    results: list[IsomerResult] = []
    rows: list[Table1Row] = []


class Table1Flow(BaseFlow):
    """enumerate -> volumes -> aggregate."""

    name = "table1"

    @property
    def input_schema(self) -> type[Table1Input]:
        return Table1Input

    @property
    def state_schema(self) -> type[Table1State]:
        return Table1State

    def nodes(self) -> list[tuple[str, Any]]:
        return [("enumerate", self.generate), ("volumes", self.volumes), ("aggregate", self.aggregate)]

    def generate(self, state: Table1State) -> dict:
        orders = [n for n in range(state.n_min, state.n_max + 1) if n % 2 == 0]
        graphs = {n: enumerate_isomers(n) if is_supported_order(n) else [] for n in orders}
        return {"graphs": graphs}

    def volumes(self, state: Table1State) -> dict:
        flat = [g for n in sorted(state.graphs) for g in state.graphs[n]]
        return {"results": solve_isomers(flat, self.config, self.cache)}

    def aggregate(self, state: Table1State) -> dict:
        by_n: dict[int, list[IsomerResult]] = {n: [] for n in state.graphs}
        for result in state.results:
            by_n[result.entry.volume.n_vertices].append(result)
        rows = [aggregate_row(n, by_n[n], self.config.precision) for n in sorted(by_n)]
        for row in rows:
            logger.info(f"C{row.N}: {row.isomers} isomers, min {row.min_volume}, max {row.max_volume}")
        return {"rows": rows}


def run_table1(
    n_min: int, n_max: int, config: RunConfig | None = None, cache: ResultCache | None = None
) -> list[Table1Row]:
    """
    Isomer counts, distinct volume counts and volume extremes per even N in [n_min, n_max].

    N = 22 is reported with zero isomers.
    """
    if n_min > n_max or n_min < ENUMERATION_MIN or n_max > ENUMERATION_MAX:
        msg = f"Table range [{n_min}, {n_max}] outside [{ENUMERATION_MIN}, {ENUMERATION_MAX}]"
        logger.error(msg)
        raise DomainError(msg)
    state = Table1Flow(config, cache).execute({"n_min": n_min, "n_max": n_max})
    return state.rows
