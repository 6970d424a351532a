import pytest

from qrange.findings import PRINTED_Q5_TABLE, findings_report, q5_example_table


@pytest.fixture(scope="module")
def report():
    return findings_report()


def by_id(report):
    return {f["finding_id"]: f for f in report["findings"]}


def test_discrepancy_list_matches_flags(report):
    assert report["discrepancies"] == [f["finding_id"] for f in report["findings"] if not f["agrees"]]


def test_confirmed_example(report):
    f = by_id(report)["THM_Q1_EXAMPLE"]
    assert f["agrees"]
    assert f["computed"] == pytest.approx([3.0, 4.982, 4.0], abs=1e-3)


@pytest.mark.parametrize("fid", ["W_TRIANGULAR", "M_TRIANGULAR", "REDUCED_FORM", "REDUCED_FORMULA_q=0",
                                 "REDUCED_FORMULA_q=0.5", "Q5_TABLE", "THM_Q3_STATED", "THM_Q3_PROVED", "THM_Q1_SMALL_Q",
                                 "THM_Q4_BLOCK_DIAGONAL", "THM2_SWAP", "THM2_INCLUSION", "THM3_REAL_INTERVAL",
                                 "THM3_DIAG_I", "THM1_ZERO", "THM1_SEGMENT", "THM4_WITNESS", "PROP12",
                                 "AFFINE_RADIUS"])
def test_known_discrepancies(report, fid):
    assert fid in report["discrepancies"]


def test_recomputed_values(report):
    f = by_id(report)
    assert f["W_TRIANGULAR"]["computed"] == pytest.approx(2.2071067811865475, abs=1e-9)
    assert f["M_TRIANGULAR"]["computed"] == pytest.approx(1.2071067811865475, abs=1e-9)
    assert f["THM3_REAL_INTERVAL"]["computed"]["real_extent"] == pytest.approx([0.25, 1.25], abs=1e-12)


def test_q5_table():
    want = [(0.0, 1.207107, 1.207107, 2.288246, 1.207107),
            (0.2, 1.497005, 1.62414, 2.499507, 1.62414),
            (0.4, 1.765364, 1.989174, 2.664073, 1.989174),
            (0.6, 2.007107, 2.289949, 2.760085, 2.289949),
            (0.8, 2.207107, 2.489949, 2.741522, 2.489949),
            (1.0, 2.207107, 2.207107, 2.207107, 2.207107)]
    table = q5_example_table()
    for got, row in zip(table, want):
        assert got == pytest.approx(row, abs=1e-6)
        assert got[1] <= got[4] + 1e-9
    assert len(PRINTED_Q5_TABLE) == len(table)
