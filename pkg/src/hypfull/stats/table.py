from collections.abc import Iterable
from pathlib import Path

import numpy as np
import pandas as pd
from loguru import logger
from pydantic import BaseModel

from hypfull.core.errors import InputError, MissingColumnError

EXTERNAL_COLUMNS = ("relative_energy", "nuclear_volume")


class DescriptorTable:
    """
    Per-isomer descriptors indexed by graph id.

    Rows are kept sorted by (N, id). External columns (relative_energy, nuclear_volume) are only ever
    ingested from CSV, never computed.
    """

    def __init__(self, frame: pd.DataFrame) -> None:
        if "id" in frame.columns:
            frame = frame.set_index("id")
        frame.index = frame.index.astype(str)
        frame.index.name = "id"
        if frame.index.has_duplicates:
            duplicates = sorted(set(frame.index[frame.index.duplicated()]))
            msg = f"Descriptor table has duplicate ids: {duplicates[:5]}"
            logger.error(msg)
            raise InputError(msg)
        if "N" in frame.columns:
            frame = frame.sort_index().sort_values("N", kind="stable")
        else:
            frame = frame.sort_index()
        self.frame = frame

    @classmethod
    def from_rows(cls, rows: Iterable[dict]) -> "DescriptorTable":
        rows = list(rows)
        return cls(pd.DataFrame(rows) if rows else pd.DataFrame(columns=["id", "N"]))

    @classmethod
    def read_csv(cls, path: Path) -> "DescriptorTable":
        try:
            frame = pd.read_csv(path, dtype={"id": str})
        except (OSError, pd.errors.ParserError) as e:
            msg = f"Cannot read descriptor CSV {path}: {e!s}"
            logger.error(msg)
            raise InputError(msg) from e
        if "id" not in frame.columns:
            msg = f"Descriptor CSV {path} has no 'id' column"
            logger.error(msg)
            raise MissingColumnError(msg)
        return cls(frame)

    def to_csv(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        self.frame.to_csv(path, index=True, lineterminator="\n")

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def ids(self) -> list[str]:
        return list(self.frame.index)

    def require(self, *columns: str) -> None:
        missing = [column for column in columns if column not in self.frame.columns]
        if missing:
            msg = f"Descriptor table lacks column(s) {missing}"
            logger.error(msg)
            raise MissingColumnError(msg)

    def column(self, name: str) -> pd.Series:
        self.require(name)
        return self.frame[name]

    def for_n(self, n: int) -> "DescriptorTable":
        self.require("N")
        return DescriptorTable(self.frame[self.frame["N"] == n].copy())

    def with_external(self, path: Path) -> "DescriptorTable":
        return load_external(self, path)


def load_external(table: DescriptorTable, path: Path) -> DescriptorTable:
    """Left-join relative_energy / nuclear_volume columns from a CSV keyed by id."""
    external = DescriptorTable.read_csv(path).frame
    columns = [column for column in EXTERNAL_COLUMNS if column in external.columns]
    if not columns:
        msg = f"External CSV {path} has none of the columns {list(EXTERNAL_COLUMNS)}"
        logger.error(msg)
        raise MissingColumnError(msg)
    unknown = sorted(set(external.index) - set(table.frame.index))
    if unknown:
        logger.warning(f"External CSV {path}: {len(unknown)} ids not in the descriptor table, e.g. {unknown[0]}")
    joined = table.frame.drop(columns=[c for c in columns if c in table.frame.columns]).join(external[columns])
    logger.info(f"Joined {columns} from {path.name}: {int(joined[columns[0]].notna().sum())} rows matched")
    return DescriptorTable(joined)


class Extremes(BaseModel):
    min_id: str
    min_volume: float
    max_id: str
    max_volume: float
    ranked_ids: list[str]


def order_and_extremes(table: DescriptorTable, column: str = "volume") -> Extremes:
    """Order ids by volume ascending (ties by id); the position in this order is hv_i."""
    values = table.column(column).dropna()
    if values.empty:
        msg = f"Cannot order a descriptor table without '{column}' values"
        logger.error(msg)
        raise InputError(msg)
    ranked = (
        pd.DataFrame({"id": values.index, "value": values.to_numpy()})
        .sort_values(["value", "id"], kind="stable")["id"]
        .tolist()
    )
    return Extremes(
        min_id=ranked[0],
        min_volume=float(values[ranked[0]]),
        max_id=ranked[-1],
        max_volume=float(values[ranked[-1]]),
        ranked_ids=ranked,
    )


def distinct_count(values: Iterable[float], precision: int = 6) -> int:
    """Number of distinct values after rounding to `precision` decimals."""
    return len({round(float(v), precision) for v in values if not np.isnan(v)})
