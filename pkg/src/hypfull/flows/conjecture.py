"""Checks of the minimal-volume conjectures: which isomer minimizes the volume, and is it the predicted nanotube."""

from typing import Any

from loguru import logger
from pydantic import BaseModel, computed_field

from hypfull.core.cache import ResultCache
from hypfull.core.config.run import RunConfig
from hypfull.core.errors import DomainError
from hypfull.flows.base import BaseFlow, BaseFlowInput, BaseGraphState
from hypfull.flows.descriptors import IsomerResult, solve_isomers
from hypfull.graphcore.model import FullereneGraph
from hypfull.graphcore.nanotube import nanotube_a
from hypfull.graphcore.spiral import enumerate_isomers, is_isomorphic
from hypfull.hypfun.lobachevsky import dodecahedron_volume_closed_form

VOLUME_TOLERANCE = 1e-5
EXCEPTIONAL_ORDERS = frozenset({20, 24, 26, 28, 34})
FAMILY_B_MIN_K = 5


def cap_family(n: int) -> str:
    """Predicted cap type of the minimal-volume isomer of C_n."""
    if n in EXCEPTIONAL_ORDERS:
        return "exceptional"
    if n % 10 == 0:
        return "a"
    if (n + 4) % 6 == 0 and (n + 4) // 6 >= FAMILY_B_MIN_K:
        return "b"
    return "c/d"


def predicted_type_a_volume(n: int) -> float:
    """(N/10 - 1) dodecahedra glued along pentagons."""
    return (n / 10 - 1) * dodecahedron_volume_closed_form()


class ConjectureReport(BaseModel):
    n: int
    isomers: int
    cap_family: str
    min_volume_id: str
    min_volume_spiral: str
    observed_min: float
    predicted: float | None = None
    is_type_a_nanotube: bool | None = None
    max_wiener_is_min_volume: bool
    single_pentagon_component: bool | None = None

    @computed_field
    @property
    def verdict(self) -> bool | None:
        """True iff the minimizer is the type-(a) nanotube with the predicted volume; None outside family (a)."""
        if self.predicted is None or self.is_type_a_nanotube is None:
            return None
        return self.is_type_a_nanotube and abs(self.predicted - self.observed_min) <= VOLUME_TOLERANCE


class ConjectureInput(BaseFlowInput):
    n: int


class ConjectureState(BaseGraphState):
    n: int
    graphs: list[FullereneGraph] = []
    results: list[IsomerResult] = []
    minimizer: FullereneGraph | None = None
    is_type_a_nanotube: bool | None = None
    max_wiener_is_min_volume: bool | None = None
    report: ConjectureReport | None = None


class ConjectureFlow(BaseFlow):
    """enumerate -> volumes -> nanotube check -> Wiener check -> summarize."""

    name = "conjecture"

    @property
    def input_schema(self) -> type[ConjectureInput]:
        return ConjectureInput

    @property
    def state_schema(self) -> type[ConjectureState]:
        return ConjectureState

    def nodes(self) -> list[tuple[str, Any]]:
        return [
            ("enumerate", self.generate),
            ("volumes", self.volumes),
            ("nanotube", self.nanotube),
            ("wiener", self.wiener),
            ("summarize", self.summarize),
        ]

    def generate(self, state: ConjectureState) -> dict:
        graphs = enumerate_isomers(state.n)
        if not graphs:
            msg = f"C{state.n} has no isomers"
            logger.error(msg)
            raise DomainError(msg)
        return {"graphs": graphs}

    def volumes(self, state: ConjectureState) -> dict:
        results = solve_isomers(state.graphs, self.config, self.cache)
        index = min(range(len(results)), key=lambda i: (results[i].entry.volume.volume, results[i].source_id))
        return {"results": results, "minimizer": state.graphs[index]}

    def nanotube(self, state: ConjectureState) -> dict:
        if cap_family(state.n) != "a":
            return {"is_type_a_nanotube": None}
        return {"is_type_a_nanotube": is_isomorphic(state.minimizer, nanotube_a(state.n // 10 - 1))}

    def wiener(self, state: ConjectureState) -> dict:
        top = max(r.entry.indices.W for r in state.results)
        maximizers = {r.source_id for r in state.results if r.entry.indices.W == top}
        return {"max_wiener_is_min_volume": state.minimizer.graph_id in maximizers}

    def summarize(self, state: ConjectureState) -> dict:
        minimum = next(r for r in state.results if r.source_id == state.minimizer.graph_id)
        family = cap_family(state.n)
        report = ConjectureReport(
            n=state.n,
            isomers=len(state.results),
            cap_family=family,
            min_volume_id=minimum.source_id,
            min_volume_spiral=minimum.spiral,
            observed_min=minimum.entry.volume.volume,
            predicted=predicted_type_a_volume(state.n) if family == "a" else None,
            is_type_a_nanotube=state.is_type_a_nanotube,
            max_wiener_is_min_volume=bool(state.max_wiener_is_min_volume),
            single_pentagon_component=(
                minimum.entry.indices.pentagon_components == 1 if family == "exceptional" else None
            ),
        )
        logger.info(
            f"C{state.n}: minimal volume {report.observed_min:.6f} at {report.min_volume_spiral or report.min_volume_id}"
            f" (family {family}, verdict {report.verdict})"
        )
        return {"report": report}


def check_conjecture_family(n: int, config: RunConfig | None = None, cache: ResultCache | None = None) -> ConjectureReport:
    """Minimal-volume isomer of C_n with the checks that apply to its predicted cap family."""
    state = ConjectureFlow(config, cache).execute({"n": n})
    return state.report


def check_conjecture_a(n: int, config: RunConfig | None = None, cache: ResultCache | None = None) -> ConjectureReport:
    """The minimal-volume isomer of C_n, n divisible by 10 and at least 30, against the type-(a) nanotube."""
    if n % 10 != 0 or n < 30:  # noqa: PLR2004
        msg = f"Type-(a) conjecture needs N divisible by 10 and N >= 30, got {n}"
        logger.error(msg)
        raise DomainError(msg)
    return check_conjecture_family(n, config, cache)
