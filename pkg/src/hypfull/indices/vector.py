from fractions import Fraction
from typing import Any

from loguru import logger
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator

from hypfull.graphcore.model import FullereneGraph
from hypfull.indices.distances import (
    distance_matrix,
    dual_distance_matrix,
    hyper_wiener,
    transmissions,
    w5,
    wiener,
    wiener_complexity,
)
from hypfull.indices.independence import independence_lower_bound
from hypfull.indices.signatures import hexagon_signature, pentagon_components, pentagon_signature, second_moment

INDEX_COLUMNS = (
    "W",
    "WW",
    "W5",
    "Np",
    "H5",
    "H6",
    *(f"p{k}" for k in range(6)),
    *(f"h{k}" for k in range(7)),
    "wiener_complexity",
)


class IndexVector(BaseModel):
    """
    Topological indices of one fullerene.

    WW and W5 are exact rationals under the unordered-pair convention: W = sum d, WW = sum (d + d^2)/2,
    W5 = sum d*^2 over pentagon pairs of the dual.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    graph_id: str
    n_vertices: int
    W: int
    WW: Fraction
    W5: Fraction
    Np: int
    H5: int
    H6: int
    p_signature: tuple[int, ...]
    h_signature: tuple[int, ...]
    transmissions: tuple[int, ...]
    wiener_complexity: int
    independence_lower_bound: float
    pentagon_components: int

    @field_validator("WW", "W5", mode="before")
    @classmethod
    def parse_fraction(cls, value: Any) -> Fraction:
        return Fraction(value)

    @field_serializer("WW", "W5")
    def dump_fraction(self, value: Fraction) -> str:
        return str(value)

    @property
    def is_transmission_irregular(self) -> bool:
        return self.wiener_complexity == self.n_vertices

    def as_row(self) -> dict[str, float | int]:
        row: dict[str, float | int] = {
            "W": self.W,
            "WW": float(self.WW),
            "W5": float(self.W5),
            "Np": self.Np,
            "H5": self.H5,
            "H6": self.H6,
        }
        row.update({f"p{k}": count for k, count in enumerate(self.p_signature)})
        row.update({f"h{k}": count for k, count in enumerate(self.h_signature)})
        row["wiener_complexity"] = self.wiener_complexity
        return row


def compute_indices(g: FullereneGraph) -> IndexVector:
    distances = distance_matrix(g)
    tr = transmissions(g, distances)
    p = pentagon_signature(g)
    h = hexagon_signature(g)
    vector = IndexVector(
        graph_id=g.graph_id,
        n_vertices=g.n_vertices,
        W=wiener(g, distances),
        WW=hyper_wiener(g, distances),
        W5=w5(g, dual_distance_matrix(g)),
        Np=sum(k * count for k, count in enumerate(p)) // 2,
        H5=second_moment(p),
        H6=second_moment(h),
        p_signature=p,
        h_signature=h,
        transmissions=tr,
        wiener_complexity=wiener_complexity(tr),
        independence_lower_bound=independence_lower_bound(g.n_vertices),
        pentagon_components=pentagon_components(g),
    )
    logger.debug(f"Graph '{g.graph_id}': W={vector.W} WW={vector.WW} W5={vector.W5} Np={vector.Np}")
    return vector
