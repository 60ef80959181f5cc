import math

from loguru import logger

from hypfull.core.errors import BudgetExceededError, DomainError
from hypfull.graphcore.model import FullereneGraph

DEFAULT_NODE_BUDGET = 2_000_000


def independence_lower_bound(n: int) -> float:
    """Lower bound N/2 - sqrt(3N/5) on the independence number of a fullerene with N vertices."""
    if n < 20:  # noqa: PLR2004
        msg = f"Independence bound needs N >= 20, got {n}"
        logger.error(msg)
        raise DomainError(msg)
    return n / 2 - math.sqrt(3 * n / 5)


def _matching_bound(candidates: int, masks: list[int]) -> int:
    """Candidate count minus a greedy matching: at most one endpoint of each matched edge is independent."""
    free = candidates
    matched = 0
    while free:
        low = free & -free
        v = low.bit_length() - 1
        free ^= low
        partners = masks[v] & free
        if partners:
            free ^= partners & -partners
            matched += 1
    return candidates.bit_count() - matched


def exact_independence(g: FullereneGraph, node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    """
    Independence number by branch and bound over vertex bitsets.

    Vertices with at most one remaining neighbor are taken greedily; otherwise the search branches on a
    vertex of maximum remaining degree and prunes with a matching bound.
    """
    masks = [sum(1 << w for w in nbrs) for nbrs in g.adjacency]
    best = 0
    nodes = 0

    def search(candidates: int, size: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            msg = f"Graph '{g.graph_id}': independence search exceeded {node_budget} nodes"
            logger.error(msg)
            raise BudgetExceededError(msg)

        reduced = True
        while reduced and candidates:
            reduced = False
            rest = candidates
            while rest:
                low = rest & -rest
                rest ^= low
                v = low.bit_length() - 1
                if candidates & low and (masks[v] & candidates).bit_count() <= 1:
                    candidates &= ~(low | masks[v])
                    size += 1
                    reduced = True

        if not candidates:
            best = max(best, size)
            return
        if size + _matching_bound(candidates, masks) <= best:
            return

        rest = candidates
        pivot, pivot_degree = -1, -1
        while rest:
            low = rest & -rest
            rest ^= low
            v = low.bit_length() - 1
            degree = (masks[v] & candidates).bit_count()
            if degree > pivot_degree:
                pivot, pivot_degree = v, degree
        bit = 1 << pivot
        search(candidates & ~(bit | masks[pivot]), size + 1)
        search(candidates & ~bit, size)

    search((1 << g.n_vertices) - 1, 0)
    logger.debug(f"Graph '{g.graph_id}': independence number {best} after {nodes} search nodes")
    return best
