from collections.abc import Sequence

import numpy as np
import pandas as pd
from loguru import logger
from pydantic import BaseModel

from hypfull.core.errors import DomainError
from hypfull.stats.table import DescriptorTable

NP_GROUPS = range(4, 15)


def pcc(x: Sequence[float] | np.ndarray | pd.Series, y: Sequence[float] | np.ndarray | pd.Series) -> float:
    """Pearson correlation coefficient of two equally long columns."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        msg = f"PCC needs two columns of equal length, got shapes {x.shape} and {y.shape}"
        logger.error(msg)
        raise DomainError(msg)
    if len(x) < 2:  # noqa: PLR2004
        msg = f"PCC needs at least two observations, got {len(x)}"
        logger.error(msg)
        raise DomainError(msg)

    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(np.sqrt(dx @ dx))
    sy = float(np.sqrt(dy @ dy))
    if sx == 0 or sy == 0:
        msg = "PCC is undefined for a column with zero variance"
        logger.error(msg)
        raise DomainError(msg)
    return float(np.clip((dx @ dy) / (sx * sy), -1.0, 1.0))


def pcc_pairwise(table: DescriptorTable, x: str, y: str) -> float:
    """PCC over the rows where both columns are present."""
    table.require(x, y)
    pair = table.frame[[x, y]].dropna()
    dropped = len(table) - len(pair)
    if dropped:
        logger.debug(f"PCC({x}, {y}): {dropped} rows without both values excluded")
    return pcc(pair[x], pair[y])


def pcc_matrix(table: DescriptorTable, columns: Sequence[str]) -> pd.DataFrame:
    """Symmetric PCC matrix of the given columns with pairwise complete observations."""
    table.require(*columns)
    frame = table.frame[list(columns)].astype(float)
    constant = [column for column in columns if frame[column].nunique(dropna=True) < 2]  # noqa: PLR2004
    if constant:
        logger.warning(f"Columns with zero variance have undefined PCC: {constant}")
    return frame.corr(method="pearson", min_periods=2)


class SlopeRow(BaseModel):
    Np: int
    slope: float
    pcc: float
    count: int


def linear_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of y against x."""
    dx = x - x.mean()
    return float((dx @ (y - y.mean())) / (dx @ dx))


def per_np_slopes(
    table: DescriptorTable, target: str = "relative_energy", feature: str = "volume", groups: range = NP_GROUPS
) -> list[SlopeRow]:
    """
    Slope and PCC of `target` against `feature` within each group of isomers sharing the same Np.

    Groups with fewer than two rows or a constant column are skipped.
    """
    table.require("Np", target, feature)
    frame = table.frame[["Np", target, feature]].dropna()
    rows = []
    for np_value, group in frame.groupby("Np", sort=True):
        if int(np_value) not in groups or len(group) < 2:  # noqa: PLR2004
            continue
        x = group[feature].to_numpy(dtype=float)
        y = group[target].to_numpy(dtype=float)
        if np.ptp(x) == 0 or np.ptp(y) == 0:
            logger.debug(f"Np={int(np_value)}: constant column, slope skipped")
            continue
        rows.append(SlopeRow(Np=int(np_value), slope=linear_slope(x, y), pcc=pcc(x, y), count=len(group)))
    return rows


def slopes_frame(rows: Sequence[SlopeRow]) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump() for row in rows], columns=list(SlopeRow.model_fields))
