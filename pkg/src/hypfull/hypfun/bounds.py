"""Volume bounds for right-angled and ideal polyhedra, hyperbolic balls and sphericity."""

import math

from loguru import logger
from pydantic import BaseModel

from hypfull.core.errors import DomainError
from hypfull.graphcore.model import FullereneGraph
from hypfull.hypfun.lobachevsky import V3, V8

RIGHT_ANGLED_MIN = 20
FULLERENE_BOUND_MIN = 24


def _require(condition: bool, msg: str) -> None:  # noqa: FBT001
    if not condition:
        logger.error(msg)
        raise DomainError(msg)


def atkinson_bounds(n: int) -> tuple[float, float]:
    """((N-2) v8/32, (N-10) 5v3/8) for a compact right-angled polyhedron with N vertices."""
    _require(n >= RIGHT_ANGLED_MIN, f"Right-angled bounds need N >= {RIGHT_ANGLED_MIN}, got {n}")
    return (n - 2) * V8 / 32, (n - 10) * 5 * V3 / 8


def two_face_bound(n: int, n1: int, n2: int) -> float:
    _require(min(n1, n2) >= 5, f"Face sizes must be at least 5, got {n1}, {n2}")  # noqa: PLR2004
    return (n - n1 - n2) * 5 * V3 / 8


def three_face_bound(n: int, n1: int, n2: int, n3: int) -> float:
    """Bound for faces F1, F2, F3 with F2 adjacent to both others."""
    _require(min(n1, n2, n3) >= 5, f"Face sizes must be at least 5, got {n1}, {n2}, {n3}")  # noqa: PLR2004
    return (n - n1 - n2 - n3 + 4) * 5 * V3 / 8


def fullerene_bound(n: int) -> float:
    _require(n >= FULLERENE_BOUND_MIN, f"Fullerene upper bound needs N >= {FULLERENE_BOUND_MIN}, got {n}")
    return (n - 14) * 5 * V3 / 8


class IdealBounds(BaseModel):
    lower_atkinson: float
    lower_fullerene: float | None
    upper: float


def ideal_bounds(n: int) -> IdealBounds:
    """Bounds for an ideal π/3-equiangular polyhedron with N vertices."""
    _require(n > 4, f"Ideal bounds need N > 4, got {n}")  # noqa: PLR2004
    lower_fullerene = None
    if n >= RIGHT_ANGLED_MIN:
        lower_fullerene = V3 * math.ceil(n / 2 - math.sqrt(3 * n / 5))
    return IdealBounds(lower_atkinson=n * 3 * V3 / 8, lower_fullerene=lower_fullerene, upper=(3 * n - 14) * V3 / 2)


def ball_volume(r: float) -> float:
    _require(r > 0, f"Ball radius must be positive, got {r}")
    return math.pi * (math.sinh(2 * r) - 2 * r)


def ball_area(r: float) -> float:
    _require(r > 0, f"Ball radius must be positive, got {r}")
    return 2 * math.pi * (math.cosh(2 * r) - 1)


def polyhedron_area(n: int) -> float:
    """Surface area of a compact right-angled polyhedron with N vertices."""
    return math.pi * ((n + 4) / 2 - 6)


def sphericity_from_area(volume: float, area: float) -> float:
    """Volume divided by the volume of the ball with the same surface area."""
    _require(area > 0, f"Area must be positive, got {area}")
    radius = 0.5 * math.acosh(1 + area / (2 * math.pi))
    return volume / ball_volume(radius)


def sphericity_denominator(n: int) -> float:
    x = (n - 4) / 4
    _require(x > 1, f"Sphericity denominator needs (N-4)/4 > 1, got N = {n}")
    a = math.acosh(x)
    return math.pi * (math.sinh(a) - a)


def has_hexagon_triple(g: FullereneGraph) -> bool:
    """Hexagons F1, F2, F3 with F2 adjacent to both F1 and F3."""
    dual = g.dual
    return any(
        sum(1 for w in dual.adjacency[face] if dual.degree[w] == 6) >= 2  # noqa: PLR2004
        for face in dual.hexagons
    )


def _best_two_faces(g: FullereneGraph) -> tuple[int, int]:
    sizes = sorted(g.face_sizes, reverse=True)
    return sizes[0], sizes[1]


def _best_three_faces(g: FullereneGraph) -> tuple[int, int, int] | None:
    dual = g.dual
    best = None
    for middle, nbrs in enumerate(dual.adjacency):
        outer = sorted((dual.degree[w] for w in nbrs), reverse=True)
        triple = (outer[0], dual.degree[middle], outer[1])
        if best is None or sum(triple) > sum(best):
            best = triple
    return best


class BoundSandwich(BaseModel):
    """Every applicable bound for one polyhedron, optionally with its computed volume."""

    n_vertices: int
    lower: float
    upper_atkinson: float
    upper_two_face: float
    upper_three_face: float | None
    upper_fullerene: float | None
    hexagon_triple: bool
    volume: float | None = None

    @property
    def upper(self) -> float:
        candidates = [self.upper_atkinson, self.upper_two_face, self.upper_three_face, self.upper_fullerene]
        return min(value for value in candidates if value is not None)

    def violations(self, slack: float = 1e-9) -> list[str]:
        if self.volume is None:
            return []
        found = []
        if self.volume < self.lower - slack:
            found.append(f"volume {self.volume:.9f} below lower bound {self.lower:.9f}")
        for name in ("upper_atkinson", "upper_two_face", "upper_three_face", "upper_fullerene"):
            bound = getattr(self, name)
            if bound is not None and self.volume > bound + slack:
                found.append(f"volume {self.volume:.9f} above {name} {bound:.9f}")
        return found

    def holds(self, slack: float = 1e-9) -> bool:
        return not self.violations(slack)


def bound_sandwich(g: FullereneGraph, volume: float | None = None) -> BoundSandwich:
    n = g.n_vertices
    lower, upper = atkinson_bounds(n)
    n1, n2 = _best_two_faces(g)
    triple = _best_three_faces(g)
    sandwich = BoundSandwich(
        n_vertices=n,
        lower=lower,
        upper_atkinson=upper,
        upper_two_face=two_face_bound(n, n1, n2),
        upper_three_face=three_face_bound(n, *triple) if triple is not None else None,
        upper_fullerene=fullerene_bound(n) if n >= FULLERENE_BOUND_MIN else None,
        hexagon_triple=has_hexagon_triple(g),
        volume=volume,
    )
    for violation in sandwich.violations():
        logger.warning(f"Graph '{g.graph_id}': {violation}")
    return sandwich
