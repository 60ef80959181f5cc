import json
import re
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import Any

from loguru import logger
from pydantic import BaseModel

from hypfull.core.cache import CacheEntry, ResultCache
from hypfull.core.config.run import RunConfig, SolverConfig, VolumeConfig
from hypfull.core.errors import InputError
from hypfull.flows.base import BaseFlow, BaseFlowInput, BaseGraphState
from hypfull.graphcore.loader import load_many
from hypfull.graphcore.model import FullereneGraph, is_supported_order
from hypfull.graphcore.spiral import canonical_spiral, enumerate_isomers, wind_spiral
from hypfull.graphcore.validation import validate_fullerene
from hypfull.indices.vector import compute_indices
from hypfull.realize.solver import realization_to_dict, realize
from hypfull.stats.table import DescriptorTable
from hypfull.volume.polyhedron import polyhedron_volume

SCATTER_COLUMNS = ("sphericity", "W", "WW", "W5", "Np", "H5", "H6")


class IsomerResult(BaseModel):
    """Everything computed for one input graph; `entry` is keyed by the canonical spiral."""

    source_id: str
    spiral: str
    entry: CacheEntry
    cached: bool

    def as_row(self) -> dict[str, Any]:
        volume = self.entry.volume
        return {
            "id": self.source_id,
            "N": volume.n_vertices,
            "spiral": self.spiral,
            **volume.as_row(),
            **self.entry.indices.as_row(),
            "realization_residual": self.entry.realization.residual,
        }


def canonical_form(g: FullereneGraph) -> tuple[str, FullereneGraph]:
    """Cache key and the graph relabelled along its canonical spiral; graphs without a spiral keep their labels."""
    code = canonical_spiral(g)
    if code is None:
        return f"nospiral:{g.graph_id}", g
    wound = wind_spiral(code)
    if wound is None:
        return f"nospiral:{g.graph_id}", g
    return code.label(), wound


def describe_isomer(g: FullereneGraph, key: str, solver: SolverConfig, volume_cfg: VolumeConfig) -> CacheEntry:
    """Indices, realization and volume of one canonical graph."""
    realization = realize(g, solver)
    return CacheEntry(
        key=key,
        indices=compute_indices(g),
        volume=polyhedron_volume(g, volume_cfg=volume_cfg, realization=realization),
        realization=realization,
    )


def solve_isomers(
    graphs: Sequence[FullereneGraph], config: RunConfig, cache: ResultCache
) -> list[IsomerResult]:
    """
    Look every graph up in the cache and compute the misses, in a process pool when `config.jobs > 1`.

    Results come back in input order; isomorphic inputs share one computation.
    """
    keyed = [canonical_form(g) for g in graphs]
    entries: dict[str, CacheEntry] = {}
    hits: set[str] = set()
    pending: dict[str, FullereneGraph] = {}
    for key, canonical in keyed:
        if key in entries or key in pending:
            continue
        entry = cache.get(key)
        if entry is None:
            pending[key] = canonical
        else:
            entries[key] = entry
            hits.add(key)

    if pending:
        logger.info(f"Solving {len(pending)} isomers ({len(hits)} from cache, {config.jobs} job(s))")
        worker = partial(_describe_item, solver=config.solver, volume_cfg=config.volume)
        if config.jobs > 1:
            with ProcessPoolExecutor(max_workers=config.jobs) as executor:
                solved = list(executor.map(worker, pending.items()))
        else:
            solved = [worker(item) for item in pending.items()]
        cache.stats.solver_runs += len(solved)
        for entry in solved:
            cache.put(entry)
            entries[entry.key] = entry

    return [
        IsomerResult(source_id=g.graph_id, spiral="" if key.startswith("nospiral:") else key, entry=entries[key],
                     cached=key in hits)
        for g, (key, _) in zip(graphs, keyed, strict=True)
    ]


def _describe_item(item: tuple[str, FullereneGraph], solver: SolverConfig, volume_cfg: VolumeConfig) -> CacheEntry:
    key, g = item
    return describe_isomer(g, key, solver, volume_cfg)


def results_table(results: Sequence[IsomerResult]) -> DescriptorTable:
    return DescriptorTable.from_rows([result.as_row() for result in results])


def safe_name(graph_id: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", graph_id).strip("_")


def write_realizations(results: Sequence[IsomerResult], directory: Path) -> list[Path]:
    """One JSON document per result; coordinates follow the canonical labeling of the spiral."""
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for result in results:
        document = {"source_id": result.source_id, **realization_to_dict(result.entry.realization)}
        path = directory / f"{safe_name(result.source_id)}.json"
        path.write_text(json.dumps(document, indent=4), encoding="utf-8")
        paths.append(path)
    return paths


def write_scatter(table: DescriptorTable, directory: Path) -> list[Path]:
    """Pairs (volume, index) per descriptor, for external plotting."""
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for column in SCATTER_COLUMNS:
        path = directory / f"volume_vs_{column}.csv"
        table.frame[["N", "volume", column]].to_csv(path, index=True, lineterminator="\n")
        paths.append(path)
    return paths


class DescriptorInput(BaseFlowInput):
    graphs: list[FullereneGraph] = []
    input_paths: list[Path] = []
    n_values: list[int] = []
    output_dir: Path | None = None


class DescriptorState(BaseGraphState):
    graphs: list[FullereneGraph] = []
    input_paths: list[Path] = []
    n_values: list[int] = []
    output_dir: Path | None = None
    results: list[IsomerResult] = []
    written: list[Path] = []


class DescriptorFlow(BaseFlow):
    """ingest -> validate -> solve (cached) -> emit."""

    name = "descriptors"

    @property
    def input_schema(self) -> type[DescriptorInput]:
        return DescriptorInput

    @property
    def state_schema(self) -> type[DescriptorState]:
        return DescriptorState

    def nodes(self) -> list[tuple[str, Any]]:
        return [("ingest", self.ingest), ("validate", self.validate), ("solve", self.solve), ("emit", self.emit)]

    def ingest(self, state: DescriptorState) -> dict:
        graphs = list(state.graphs)
        if state.input_paths:
            graphs.extend(load_many(state.input_paths))
        for n in state.n_values:
            graphs.extend(enumerate_isomers(n))
        logger.info(f"Ingested {len(graphs)} graphs")
        return {"graphs": graphs}

    def validate(self, state: DescriptorState) -> dict:
        for g in state.graphs:
            validate_fullerene(g).raise_for_failures()
        return {}

    def solve(self, state: DescriptorState) -> dict:
        return {"results": solve_isomers(state.graphs, self.config, self.cache)}

    def emit(self, state: DescriptorState) -> dict:
        if state.output_dir is None:
            return {}
        table = results_table(state.results)
        csv_path = state.output_dir / "descriptors.csv"
        try:
            table.to_csv(csv_path)
            written = [
                csv_path,
                *write_realizations(state.results, state.output_dir / "realizations"),
                *write_scatter(table, state.output_dir / "scatter"),
            ]
        except OSError as e:
            msg = f"Cannot write outputs to {state.output_dir}: {e!s}"
            logger.error(msg)
            raise InputError(msg) from e
        logger.success(f"Wrote {len(table)} descriptor rows to {csv_path}")
        return {"written": written}


def emit_descriptors(
    graphs: Sequence[FullereneGraph],
    output_dir: Path | None,
    config: RunConfig | None = None,
    cache: ResultCache | None = None,
) -> tuple[DescriptorTable, list[Path]]:
    """Descriptor table of the given graphs; with an output directory also the CSV, realization and scatter files."""
    flow = DescriptorFlow(config, cache)
    state = flow.execute({"graphs": list(graphs), "output_dir": output_dir})
    return results_table(state.results), state.written


def run_descriptors(config: RunConfig, cache: ResultCache | None = None) -> tuple[DescriptorTable, list[Path]]:
    """Descriptors for the configured input files, or for every isomer in the configured range."""
    n_values = []
    if config.generate and not config.input_paths:
        n_values = [n for n in range(config.n_min, config.n_max + 1) if is_supported_order(n)]
    flow = DescriptorFlow(config, cache)
    state = flow.execute(
        {"input_paths": config.input_paths, "n_values": n_values, "output_dir": config.output_dir}
    )
    return results_table(state.results), state.written
