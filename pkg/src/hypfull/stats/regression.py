"""Ordinary least squares over descriptor columns, solved through a QR factorization of the design matrix."""

from collections.abc import Sequence

import numpy as np
import pandas as pd
from loguru import logger
from pydantic import BaseModel, Field
from scipy.linalg import qr, solve_triangular

from hypfull.core.errors import DomainError, RankDeficiencyError
from hypfull.stats.correlation import pcc
from hypfull.stats.table import DescriptorTable

HV_FEATURES = ("H6", "Np", "W", "W5", "H5")
RE_FEATURES = ("H6", "Np", "W", "WW", "W5", "H5", "volume")

RANK_TOLERANCE = 1e-10
INTERCEPT = "intercept"


class RegressionModel(BaseModel):
    target: str
    features: list[str]
    intercept: float
    coefficients: dict[str, float]
    r_squared: float = Field(ge=0.0, le=1.0)
    n_rows: int
    dropped_rows: int = 0

    def predict(self, table: DescriptorTable) -> pd.Series:
        table.require(*self.features)
        frame = table.frame[self.features].astype(float)
        weights = np.array([self.coefficients[feature] for feature in self.features])
        return pd.Series(frame.to_numpy() @ weights + self.intercept, index=frame.index, name=f"{self.target}_pred")


def _design(frame: pd.DataFrame, features: Sequence[str]) -> np.ndarray:
    return np.column_stack([np.ones(len(frame)), frame[list(features)].to_numpy(dtype=float)])


def _dependent_columns(r: np.ndarray, permutation: np.ndarray, names: list[str]) -> list[str]:
    diagonal = np.abs(np.diag(r))
    scale = diagonal.max() if diagonal.size else 0.0
    return [names[permutation[k]] for k in range(len(diagonal)) if diagonal[k] <= RANK_TOLERANCE * max(scale, 1.0)]


def ols_fit(table: DescriptorTable, target: str, features: Sequence[str]) -> RegressionModel:
    """
    Fit target = intercept + sum(coefficient * feature) over the rows where every column is present.

    Raises:
        DomainError: fewer rows than features + 1.
        RankDeficiencyError: the design matrix is not of full column rank; lists the dependent columns.

    """
    features = list(features)
    table.require(target, *features)
    frame = table.frame[[target, *features]].dropna()
    dropped = len(table) - len(frame)
    if dropped:
        logger.info(f"OLS {target} ~ {features}: {dropped} incomplete rows excluded")
    if len(frame) < len(features) + 1:
        msg = f"OLS needs at least {len(features) + 1} complete rows, got {len(frame)}"
        logger.error(msg)
        raise DomainError(msg)

    x = _design(frame, features)
    y = frame[target].to_numpy(dtype=float)
    names = [INTERCEPT, *features]

    # Pivoted QR puts dependent columns last, with a vanishing diagonal.
    _, r, permutation = qr(x, mode="economic", pivoting=True)
    dependent = _dependent_columns(r, permutation, names)
    if dependent:
        msg = f"Design matrix for {target} is rank deficient; dependent column(s): {dependent}"
        logger.error(msg)
        raise RankDeficiencyError(msg, dependent_columns=dependent)

    q, r = np.linalg.qr(x)
    beta = solve_triangular(r, q.T @ y)
    residuals = y - x @ beta
    total = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - float(residuals @ residuals) / total if total > 0 else 1.0

    model = RegressionModel(
        target=target,
        features=features,
        intercept=float(beta[0]),
        coefficients={feature: float(value) for feature, value in zip(features, beta[1:], strict=True)},
        r_squared=float(np.clip(r_squared, 0.0, 1.0)),
        n_rows=len(frame),
        dropped_rows=dropped,
    )
    logger.info(f"OLS {target} ~ {' + '.join(features)}: R^2 = {model.r_squared:.6f} on {model.n_rows} rows")
    return model


def hv_model(table: DescriptorTable) -> RegressionModel:
    """Hyperbolic volume predicted from the topological indices."""
    return ols_fit(table, "volume", HV_FEATURES)


def re_model(table: DescriptorTable) -> RegressionModel:
    """Relative energy predicted from the indices and the volume."""
    return ols_fit(table, "relative_energy", RE_FEATURES)


def model_transfer_pcc(model: RegressionModel, table: DescriptorTable) -> float:
    """PCC between predictions of a fitted model on another table and that table's observed target."""
    table.require(model.target)
    predicted = model.predict(table)
    pair = pd.concat([predicted, table.frame[model.target]], axis=1).dropna()
    return pcc(pair.iloc[:, 0], pair.iloc[:, 1])
