from collections import Counter

import networkx as nx
from loguru import logger
from pydantic import BaseModel

from hypfull.core.errors import GraphValidationError
from hypfull.graphcore.model import PENTAGON_COUNT, FullereneGraph, is_supported_order


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class ValidationReport(BaseModel):
    """Pass/fail per fullerene invariant. Cyclic 5-connectivity follows from the others and is not checked."""

    graph_id: str
    n_vertices: int
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def summary(self) -> str:
        if self.passed:
            return "all checks pass"
        return "; ".join(f"{check.name}: {check.detail}" for check in self.failures)

    def raise_for_failures(self) -> None:
        if not self.passed:
            msg = f"Graph '{self.graph_id}' is not a fullerene: {self.summary()}"
            logger.error(msg)
            raise GraphValidationError(msg)


def validate_fullerene(g: FullereneGraph) -> ValidationReport:
    n = g.n_vertices
    checks = [
        CheckResult(
            name="vertex_count",
            passed=is_supported_order(n),
            detail="" if is_supported_order(n) else f"odd/invalid vertex count {n}",
        )
    ]

    bad_degrees = [v for v, nbrs in enumerate(g.adjacency) if len(nbrs) != 3]  # noqa: PLR2004
    checks.append(
        CheckResult(
            name="cubic",
            passed=not bad_degrees,
            detail=f"vertices {bad_degrees[:5]} do not have degree 3" if bad_degrees else "",
        )
    )
    connected = nx.is_connected(g.to_networkx())
    checks.append(
        CheckResult(name="connected", passed=connected, detail="" if connected else "graph is disconnected")
    )

    try:
        sizes = g.face_sizes
    except GraphValidationError as e:
        checks.append(CheckResult(name="faces_close", passed=False, detail=str(e)))
        return ValidationReport(graph_id=g.graph_id, n_vertices=n, checks=checks)
    checks.append(CheckResult(name="faces_close", passed=True))

    counts = Counter(sizes)
    odd_sizes = sorted(size for size in counts if size not in (5, 6))
    checks.append(
        CheckResult(
            name="face_sizes",
            passed=not odd_sizes,
            detail="; ".join(f"face of size {size}" for size in odd_sizes),
        )
    )

    expected_faces = n // 2 + 2
    checks.append(
        CheckResult(
            name="euler",
            passed=len(sizes) == expected_faces,
            detail="" if len(sizes) == expected_faces else f"{len(sizes)} faces, expected {expected_faces}",
        )
    )
    checks.append(
        CheckResult(
            name="pentagon_count",
            passed=counts[5] == PENTAGON_COUNT,
            detail="" if counts[5] == PENTAGON_COUNT else f"{counts[5]} pentagons, expected {PENTAGON_COUNT}",
        )
    )

    simple = g.dual.is_simple()
    checks.append(
        CheckResult(name="dual_simple", passed=simple, detail="" if simple else "two faces share more than one edge")
    )

    report = ValidationReport(graph_id=g.graph_id, n_vertices=n, checks=checks)
    if report.passed:
        logger.debug(f"Graph '{g.graph_id}' passes fullerene validation")
    else:
        logger.debug(f"Graph '{g.graph_id}' fails validation: {report.summary()}")
    return report
