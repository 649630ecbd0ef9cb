import math

import numpy as np
import pytest

from src.errors import NotProperSlant, WrongDimensions
from src.inequalities import (
    CASE_HORIZONTAL,
    CASE_VERTICAL,
    TTable,
    inequality_from_table,
    inequality_horizontal,
    inequality_vertical,
    summarize,
)
from src.slant import slant_constancy

X5 = np.array([0.1, -0.2, 0.3, 0.05, -0.1])


def test_table_is_symmetric_in_the_lower_indices():
    table = TTable.parse("T21^4=2, T11^5=-1")
    assert table.get(1, 2, 4) == 2.0
    assert table.get(2, 1, 4) == 2.0
    assert table.get(1, 1, 5) == -1.0
    assert table.get(2, 2, 4) == 0.0


@pytest.mark.parametrize("text", ["T1^4=1", "T11^4", "X11^4=1"])
def test_bad_table_text(text):
    with pytest.raises(ValueError):
        TTable.parse(text)


def test_vertical_equality_case():
    report = inequality_from_table(CASE_VERTICAL, TTable({"T11^4": 3.0, "T22^4": 1.0}))
    assert report.mean_curvature_sq == pytest.approx(16.0 / 9.0)
    assert report.tau_hat == pytest.approx(2.0)
    assert report.slack == pytest.approx(0.0, abs=1e-12)
    assert all(report.flags.values())
    assert report.equality_consistent


def test_vertical_strict_case():
    report = inequality_from_table(CASE_VERTICAL, TTable({"T11^4": 1.0, "T22^4": 1.0}))
    assert report.slack == pytest.approx(4.0 / 9.0)
    assert not report.flags["T11^4 = 3 T22^4"]
    assert report.equality_consistent


def test_horizontal_flags_without_equality():
    report = inequality_from_table(CASE_HORIZONTAL, TTable({"T11^4": 1.0, "T22^4": -1.0}))
    assert report.slack == pytest.approx(0.25)
    assert all(report.flags.values())
    assert report.equality_consistent is None


def test_horizontal_strict_case():
    report = inequality_from_table(CASE_HORIZONTAL, TTable({"T11^3": 1.0}))
    assert report.slack == pytest.approx(0.25)
    assert not report.flags["T11^3 = 0"]


def test_curvature_term():
    report = inequality_from_table(CASE_VERTICAL, TTable({}), c=2.0, theta=math.pi / 3)
    assert report.curvature_term == pytest.approx(0.5 * (1.0 + 0.75))
    assert report.tau_hat == pytest.approx(0.875)
    assert report.bound == pytest.approx(0.0)


def test_unknown_case():
    with pytest.raises(ValueError):
        inequality_from_table("diagonal", TTable({}))


def test_vertical_inequality_on_e3(e3):
    F = e3.submersion
    report = inequality_vertical(F, X5, 0.0, slant_constancy(F, 2, 3, 0))
    assert report.slack >= -1e-6
    assert report.mean_curvature_sq == pytest.approx(0.0, abs=1e-10)
    assert report.curvatures["route-gap"] < 1e-4
    assert report.curvatures["space-form-defect"] < 1e-4
    summary = summarize([report])
    assert summary.passed, summary.failures()


def test_horizontal_inequality_on_hor(hor):
    F = hor.submersion
    report = inequality_horizontal(F, X5, 0.0, slant_constancy(F, 2, 3, 0))
    assert report.slack >= -1e-6
    assert summarize([report]).passed


def test_inequality_preconditions(e3, e4, mixed):
    with pytest.raises(WrongDimensions):
        inequality_horizontal(e3.submersion, X5, 0.0, slant_constancy(e3.submersion, 1, 2, 0))
    with pytest.raises(NotProperSlant):
        inequality_vertical(e4.submersion, X5, 0.0, slant_constancy(e4.submersion, 1, 2, 0))
    x7 = np.zeros(7)
    with pytest.raises(WrongDimensions):
        inequality_vertical(mixed.submersion, x7, 0.0, slant_constancy(mixed.submersion, 1, 2, 0))
