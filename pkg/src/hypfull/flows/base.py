from abc import ABC, abstractmethod
from typing import Any, ClassVar

from langgraph.graph import StateGraph
from loguru import logger
from pydantic import BaseModel, ConfigDict

from hypfull.core.cache import ResultCache
from hypfull.core.config.run import RunConfig


class BaseFlowInput(BaseModel):
    """Base input schema - flows should subclass this."""


class BaseGraphState(BaseModel):
    """Base state of the langgraph graph."""

    model_config = ConfigDict(arbitrary_types_allowed=True)


class BaseFlow(ABC):
    """Abstract base class for the batch pipelines. Each flow is a linear LangGraph state graph."""

    name: ClassVar[str] = "flow"

    def __init__(self, config: RunConfig | None = None, cache: ResultCache | None = None) -> None:
        """
        Initialize the flow.

        Args:
            config (RunConfig | None): run settings; defaults to RunConfig().
            cache (ResultCache | None): results cache; a fresh cache honouring `config.use_cache` when omitted.

        Attributes:
            _graph (StateGraph | None): LangGraph graph instance for the flow (uncompiled).
            _compiled_graph: Compiled LangGraph graph ready for execution.

        """
        self.config = config or RunConfig()
        self.cache = cache if cache is not None else ResultCache(enabled=self.config.use_cache)
        self._graph: StateGraph | None = None
        self._compiled_graph = None

    # Core abstractions - must implement
    @property
    @abstractmethod
    def input_schema(self) -> type[BaseFlowInput]:
        """Input schema for this flow."""

    @property
    @abstractmethod
    def state_schema(self) -> type[BaseGraphState]:
        """Schema used in the graph."""

    @abstractmethod
    def nodes(self) -> list[tuple[str, Any]]:
        """Named node callables, in execution order."""

    # Common interface
    def build_graph(self) -> StateGraph:
        """Chain the nodes in order."""
        graph = StateGraph(self.state_schema)
        steps = self.nodes()
        for name, node in steps:
            graph.add_node(name, node)
        for (first, _), (second, _) in zip(steps, steps[1:], strict=False):
            graph.add_edge(first, second)
        graph.set_entry_point(steps[0][0])
        graph.set_finish_point(steps[-1][0])
        return graph

    def prepare_to_run(self, input_data: dict[str, Any]) -> BaseFlowInput:
        """Validate the input and compile the graph if needed."""
        validated_input = self.input_schema(**input_data)
        logger.debug(f"Flow '{self.name}' input: {validated_input!r}")

        if not self._compiled_graph:
            self._graph = self.build_graph()
            self._compiled_graph = self._graph.compile()
            logger.debug(f"Flow '{self.name}' graph nodes: {list(self._graph.nodes)}")

        return validated_input

    def execute(self, input_data: dict[str, Any]) -> BaseGraphState:
        """Execute the flow with given input."""
        validated_input = self.prepare_to_run(input_data)
        initial = self.state_schema(**dict(validated_input))
        result = self._compiled_graph.invoke(initial)
        state = self.state_schema(**result)
        logger.success(
            f"Flow '{self.name}' finished (cache hits {self.cache.stats.hits}, solver runs {self.cache.stats.solver_runs})"
        )
        return state
