from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from hypfull.core.errors import DomainError, InputError, MissingColumnError, RankDeficiencyError
from hypfull.stats.correlation import pcc, pcc_matrix, pcc_pairwise, per_np_slopes, slopes_frame
from hypfull.stats.regression import hv_model, model_transfer_pcc, ols_fit
from hypfull.stats.stability import Verdict, stability_criteria_check
from hypfull.stats.table import DescriptorTable, distinct_count, load_external, order_and_extremes


def stability_table(energy_sign: float = -1.0) -> DescriptorTable:
    """Eight isomers whose energy falls (or rises) strictly with volume, in three Np groups."""
    volumes = np.linspace(10.0, 10.7, 8)
    return DescriptorTable.from_rows(
        {
            "id": f"iso{k}",
            "N": 40,
            "Np": [5, 5, 5, 6, 6, 6, 7, 7][k],
            "volume": volume,
            "relative_energy": 50.0 + energy_sign * 20.0 * (volume - 10.0) + 0.01 * (k % 2),
        }
        for k, volume in enumerate(volumes)
    )


def random_table(rows: int, seed: int = 0) -> DescriptorTable:
    rng = np.random.default_rng(seed)
    frame = pd.DataFrame(rng.normal(size=(rows, 4)), columns=["a", "b", "c", "y"])
    frame["id"] = [f"r{k:04d}" for k in range(rows)]
    return DescriptorTable(frame)


def test_pcc() -> None:
    assert pcc([1, 2, 3, 4], [2, 4, 6, 8]) == pytest.approx(1.0)
    assert pcc([1, 2, 3, 4], [8, 6, 4, 2]) == pytest.approx(-1.0)
    assert pcc([1, 2, 3, 4, 5], [1, -1, 0, 1, -1]) == pytest.approx(-0.3162278, abs=1e-7)


@pytest.mark.parametrize(
    ("x", "y"),
    [([1.0], [2.0]), ([1, 2, 3], [1, 2]), ([1, 1, 1], [1, 2, 3])],
)
def test_pcc_undefined(x: list[float], y: list[float]) -> None:
    with pytest.raises(DomainError):
        pcc(x, y)


def test_pcc_pairwise_skips_missing() -> None:
    table = DescriptorTable.from_rows(
        [
            {"id": "a", "x": 1.0, "y": 1.0},
            {"id": "b", "x": 2.0, "y": 2.1},
            {"id": "c", "x": 3.0, "y": None},
            {"id": "d", "x": 4.0, "y": 3.9},
        ]
    )
    assert pcc_pairwise(table, "x", "y") == pytest.approx(pcc([1, 2, 4], [1, 2.1, 3.9]))


def test_pcc_matrix_marks_constant_columns() -> None:
    table = stability_table()
    matrix = pcc_matrix(table, ["volume", "relative_energy", "N"])
    assert matrix.loc["volume", "relative_energy"] == pytest.approx(matrix.loc["relative_energy", "volume"])
    assert matrix.loc["volume", "relative_energy"] < -0.99
    assert np.isnan(matrix.loc["N", "volume"])


def test_descriptor_table_ordering() -> None:
    table = DescriptorTable.from_rows(
        [{"id": "b", "N": 30, "volume": 2.0}, {"id": "a", "N": 30, "volume": 1.0}, {"id": "z", "N": 20, "volume": 0.5}]
    )
    assert table.ids == ["z", "a", "b"]
    assert table.for_n(30).ids == ["a", "b"]
    assert len(DescriptorTable.from_rows([])) == 0


def test_descriptor_table_rejects_duplicates() -> None:
    with pytest.raises(InputError, match="duplicate"):
        DescriptorTable.from_rows([{"id": "a", "N": 20}, {"id": "a", "N": 20}])


def test_descriptor_csv_round_trip(tmp_path: Path) -> None:
    table = stability_table()
    path = tmp_path / "desc.csv"
    table.to_csv(path)
    again = DescriptorTable.read_csv(path)
    assert again.ids == table.ids
    pd.testing.assert_frame_equal(again.frame, table.frame)


def test_descriptor_csv_without_id(tmp_path: Path) -> None:
    path = tmp_path / "bad.csv"
    path.write_text("N,volume\n20,4.3\n")
    with pytest.raises(MissingColumnError):
        DescriptorTable.read_csv(path)
    with pytest.raises(InputError):
        DescriptorTable.read_csv(tmp_path / "absent.csv")


def test_load_external(tmp_path: Path) -> None:
    table = stability_table().frame.drop(columns=["relative_energy"])
    path = tmp_path / "energies.csv"
    path.write_text("id,relative_energy\niso0,1.5\niso3,2.5\nunknown,9.0\n")
    joined = load_external(DescriptorTable(table), path)
    assert len(joined) == 8
    assert joined.column("relative_energy")["iso3"] == 2.5
    assert joined.column("relative_energy").isna().sum() == 6
    assert "unknown" not in joined.ids


def test_load_external_needs_known_columns(tmp_path: Path) -> None:
    path = tmp_path / "other.csv"
    path.write_text("id,charge\niso0,1\n")
    with pytest.raises(MissingColumnError):
        stability_table().with_external(path)


def test_order_and_extremes_ties_by_id() -> None:
    table = DescriptorTable.from_rows(
        [{"id": "c", "volume": 1.0}, {"id": "b", "volume": 1.0}, {"id": "a", "volume": 3.0}, {"id": "d", "volume": 0.5}]
    )
    extremes = order_and_extremes(table)
    assert extremes.ranked_ids == ["d", "b", "c", "a"]
    assert (extremes.min_id, extremes.max_id) == ("d", "a")
    assert extremes.max_volume == 3.0
    with pytest.raises(InputError):
        order_and_extremes(DescriptorTable(pd.DataFrame(columns=["id", "volume"])))


def test_distinct_count() -> None:
    assert distinct_count([1.0000001, 1.0000002, 2.0, float("nan")]) == 2
    assert distinct_count([1.0000001, 1.0000032], precision=7) == 2


def test_ols_exact_fit() -> None:
    frame = random_table(40).frame
    frame["y"] = 3.0 + 2.0 * frame["a"] - 0.5 * frame["b"]
    model = ols_fit(DescriptorTable(frame), "y", ["a", "b"])
    assert model.intercept == pytest.approx(3.0)
    assert model.coefficients == pytest.approx({"a": 2.0, "b": -0.5})
    assert model.r_squared == pytest.approx(1.0)
    assert model.n_rows == 40


def test_ols_noise_and_residuals() -> None:
    table = random_table(1000, seed=3)
    model = ols_fit(table, "y", ["a", "b", "c"])
    assert model.r_squared < 0.2
    residuals = (table.frame["y"] - model.predict(table)).to_numpy()
    design = np.column_stack([np.ones(1000), table.frame[["a", "b", "c"]].to_numpy()])
    np.testing.assert_allclose(design.T @ residuals, 0.0, atol=1e-8)


def test_ols_drops_incomplete_rows() -> None:
    frame = random_table(20).frame
    frame.loc[frame.index[:3], "a"] = np.nan
    model = ols_fit(DescriptorTable(frame), "y", ["a", "b"])
    assert (model.n_rows, model.dropped_rows) == (17, 3)


def test_ols_rank_deficiency() -> None:
    frame = random_table(30).frame
    frame["a2"] = 2.0 * frame["a"]
    with pytest.raises(RankDeficiencyError) as info:
        ols_fit(DescriptorTable(frame), "y", ["a", "b", "a2"])
    assert set(info.value.dependent_columns) & {"a", "a2"}


def test_ols_constant_feature_is_dependent_on_intercept() -> None:
    frame = random_table(30).frame
    frame["k"] = 7.0
    with pytest.raises(RankDeficiencyError) as info:
        ols_fit(DescriptorTable(frame), "y", ["a", "k"])
    assert set(info.value.dependent_columns) & {"intercept", "k"}


def test_ols_needs_enough_rows() -> None:
    with pytest.raises(DomainError):
        ols_fit(random_table(3), "y", ["a", "b", "c"])


def test_hv_model_needs_index_columns() -> None:
    with pytest.raises(MissingColumnError):
        hv_model(random_table(10))


def test_model_transfer_pcc() -> None:
    train = random_table(50, seed=1).frame
    train["y"] = 1.0 + train["a"] + 0.1 * train["b"]
    model = ols_fit(DescriptorTable(train), "y", ["a", "b"])
    other = random_table(30, seed=2).frame
    other["y"] = 5.0 + other["a"] + 0.1 * other["b"]
    assert model_transfer_pcc(model, DescriptorTable(other)) == pytest.approx(1.0)


def test_per_np_slopes() -> None:
    rows = per_np_slopes(stability_table())
    assert [row.Np for row in rows] == [5, 6, 7]
    assert all(row.slope < 0 and row.pcc < 0 for row in rows)
    assert [row.count for row in rows] == [3, 3, 2]
    assert list(slopes_frame(rows).columns) == ["Np", "slope", "pcc", "count"]


def test_per_np_slopes_skips_small_groups() -> None:
    frame = stability_table().frame
    frame["Np"] = [3, 5, 6, 7, 8, 9, 10, 11]
    assert per_np_slopes(DescriptorTable(frame)) == []


def test_stability_passes() -> None:
    report = stability_criteria_check(stability_table())
    assert report.extremes.verdict == Verdict.PASS
    assert report.correlation.verdict == Verdict.PASS
    assert report.np_slopes.verdict == Verdict.PASS
    assert report.passed


def test_stability_fails_with_reversed_energies() -> None:
    report = stability_criteria_check(stability_table(energy_sign=1.0))
    assert report.extremes.verdict == Verdict.FAIL
    assert report.correlation.verdict == Verdict.PASS
    assert not report.passed
    flipped = stability_criteria_check(stability_table(energy_sign=1.0), higher_is_stable=False)
    assert flipped.extremes.verdict == Verdict.PASS


def test_stability_not_applicable_for_few_rows() -> None:
    table = DescriptorTable(stability_table().frame.iloc[:4].copy())
    report = stability_criteria_check(table)
    assert report.extremes.verdict == Verdict.NOT_APPLICABLE
    assert report.passed


def test_stability_missing_energy() -> None:
    table = DescriptorTable(stability_table().frame.drop(columns=["relative_energy"]))
    with pytest.raises(MissingColumnError):
        stability_criteria_check(table)


def test_stability_extremes_compare_membership() -> None:
    # the two largest volumes are the two lowest energies, ranked the other way round
    volumes = [10.6, 10.5, 10.3, 10.2, 10.1, 10.0]
    energies = [0.2, 0.1, 0.3, 0.4, 0.5, 0.6]
    table = DescriptorTable.from_rows(
        {"id": id_, "volume": v, "relative_energy": e} for id_, v, e in zip("abcdef", volumes, energies, strict=True)
    )
    report = stability_criteria_check(table)
    assert report.extremes.verdict == Verdict.PASS
    assert report.np_slopes.verdict == Verdict.NOT_APPLICABLE


def test_stability_extremes_fail_on_wrong_member() -> None:
    volumes = [10.6, 10.5, 10.3, 10.2, 10.1, 10.0]
    energies = [0.1, 0.3, 0.2, 0.4, 0.5, 0.6]
    table = DescriptorTable.from_rows(
        {"id": id_, "volume": v, "relative_energy": e} for id_, v, e in zip("abcdef", volumes, energies, strict=True)
    )
    assert stability_criteria_check(table).extremes.verdict == Verdict.FAIL


def test_order_and_extremes_invariant_under_monotone_map() -> None:
    table = random_table(25, seed=4)
    frame = table.frame.assign(volume=table.frame["a"] + 10.0)
    before = order_and_extremes(DescriptorTable(frame))
    after = order_and_extremes(DescriptorTable(frame.assign(volume=np.exp(frame["volume"]))))
    assert (after.min_id, after.max_id) == (before.min_id, before.max_id)
    assert after.ranked_ids == before.ranked_ids


def test_order_and_extremes_skips_missing_volumes() -> None:
    table = DescriptorTable.from_rows(
        [{"id": "a", "volume": 1.0}, {"id": "b", "volume": None}, {"id": "c", "volume": 2.0}]
    )
    extremes = order_and_extremes(table)
    assert (extremes.min_id, extremes.max_id) == ("a", "c")
    assert extremes.max_volume == 2.0
    assert extremes.ranked_ids == ["a", "c"]
    with pytest.raises(InputError):
        order_and_extremes(DescriptorTable.from_rows([{"id": "a", "volume": None}]))


@pytest.mark.parametrize("seed", range(5))
def test_pcc_symmetric_and_odd(seed: int) -> None:
    rng = np.random.default_rng(seed)
    x, y = rng.normal(size=(2, 30))
    assert pcc(x, y) == pytest.approx(pcc(y, x), abs=1e-14)
    assert pcc(-x, y) == pytest.approx(-pcc(x, y), abs=1e-14)
    assert pcc(x, -y) == pytest.approx(-pcc(x, y), abs=1e-14)
    assert -1.0 <= pcc(x, y) <= 1.0
