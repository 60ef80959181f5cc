from enum import StrEnum

import pandas as pd
from loguru import logger
from pydantic import BaseModel

from hypfull.stats.correlation import NP_GROUPS, SlopeRow, pcc_pairwise, per_np_slopes
from hypfull.stats.table import DescriptorTable

PCC_THRESHOLD = 0.6
MOST_STABLE = 2
LEAST_STABLE = 3


class Verdict(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not applicable"


class CriterionResult(BaseModel):
    verdict: Verdict
    detail: str


class StabilityReport(BaseModel):
    feature: str
    rows: int
    pcc: float
    extremes: CriterionResult
    correlation: CriterionResult
    np_slopes: CriterionResult
    slope_rows: list[SlopeRow]

    @property
    def passed(self) -> bool:
        return all(
            result.verdict != Verdict.FAIL for result in (self.extremes, self.correlation, self.np_slopes)
        )


def _ranked(frame: pd.DataFrame, column: str, *, ascending: bool) -> list[str]:
    ordered = frame.reset_index().sort_values([column, "id"], ascending=[ascending, True], kind="stable")
    return ordered["id"].tolist()


def _extremes_criterion(table: DescriptorTable, feature: str, *, higher_is_stable: bool) -> CriterionResult:
    frame = table.frame[[feature, "relative_energy"]].dropna()
    if len(frame) < MOST_STABLE + LEAST_STABLE:
        return CriterionResult(
            verdict=Verdict.NOT_APPLICABLE, detail=f"needs {MOST_STABLE + LEAST_STABLE} rows, got {len(frame)}"
        )
    by_energy = _ranked(frame, "relative_energy", ascending=True)
    by_feature = _ranked(frame, feature, ascending=not higher_is_stable)

    # membership only; the order inside each group is not compared
    stable_ok = set(by_feature[:MOST_STABLE]) == set(by_energy[:MOST_STABLE])
    unstable_ok = set(by_feature[::-1][:LEAST_STABLE]) == set(by_energy[::-1][:LEAST_STABLE])
    detail = (
        f"most stable by energy {by_energy[:MOST_STABLE]} vs by {feature} {by_feature[:MOST_STABLE]}; "
        f"least stable by energy {by_energy[::-1][:LEAST_STABLE]} vs by {feature} {by_feature[::-1][:LEAST_STABLE]}"
    )
    return CriterionResult(verdict=Verdict.PASS if stable_ok and unstable_ok else Verdict.FAIL, detail=detail)


def _slope_criterion(rows: list[SlopeRow], overall_pcc: float) -> CriterionResult:
    if not rows:
        return CriterionResult(
            verdict=Verdict.NOT_APPLICABLE,
            detail=f"no group with Np in {NP_GROUPS.start}..{NP_GROUPS.stop - 1} has two or more isomers",
        )
    sign = 1.0 if overall_pcc > 0 else -1.0
    broken = [row.Np for row in rows if row.slope * sign <= 0 or row.pcc * sign <= 0]
    if broken:
        return CriterionResult(verdict=Verdict.FAIL, detail=f"slope/PCC sign differs for Np in {broken}")
    return CriterionResult(
        verdict=Verdict.PASS, detail=f"slope and PCC share the sign of the overall PCC in {len(rows)} Np groups"
    )


def stability_criteria_check(
    table: DescriptorTable, feature: str = "volume", *, higher_is_stable: bool = True
) -> StabilityReport:
    """
    Evaluate `feature` as a stability criterion against the ingested relative energies.

    Args:
        table (DescriptorTable): isomers of one class with a relative_energy column.
        feature (str): descriptor column under test.
        higher_is_stable (bool): whether large values of the feature predict low energy.

    """
    table.require(feature, "relative_energy")
    overall = pcc_pairwise(table, feature, "relative_energy")

    correlation = CriterionResult(
        verdict=Verdict.PASS if abs(overall) > PCC_THRESHOLD else Verdict.FAIL,
        detail=f"PCC({feature}, relative_energy) = {overall:.6f}",
    )
    rows = per_np_slopes(table, "relative_energy", feature) if "Np" in table.frame.columns else []
    report = StabilityReport(
        feature=feature,
        rows=len(table),
        pcc=overall,
        extremes=_extremes_criterion(table, feature, higher_is_stable=higher_is_stable),
        correlation=correlation,
        np_slopes=_slope_criterion(rows, overall),
        slope_rows=rows,
    )
    logger.info(
        f"Stability of '{feature}': extremes {report.extremes.verdict}, |PCC| {report.correlation.verdict}, "
        f"Np slopes {report.np_slopes.verdict}"
    )
    return report
