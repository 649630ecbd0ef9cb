import json
import math

import numpy as np
import pytest

from src.errors import NotProperSlant
from src.geometry import DefectReport
from src.report import CheckRecord, ReportDocument, encode, format_float


def test_records_pass_only_when_finite_and_within_tolerance():
    assert CheckRecord.from_defect("a", 1e-9, 1e-8).passed
    assert not CheckRecord.from_defect("a", 1e-7, 1e-8).passed
    assert not CheckRecord.from_defect("a", math.nan, 1e-8).passed
    assert CheckRecord.from_defect("rank", 0.0, 0.0).passed


def test_error_record():
    record = CheckRecord.from_error("NotProperSlant", NotProperSlant("verdict is invariant"))
    assert record.as_dict() == {
        "name": "NotProperSlant",
        "max_defect": None,
        "tolerance": None,
        "pass": False,
        "error": "NotProperSlant",
        "message": "verdict is invariant",
    }


def test_format_float():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(math.inf) == "null"
    assert format_float(1.0) == "1"


def test_document_layout():
    document = ReportDocument("e3", "slant-angle", 42, 3)
    document.add_report(DefectReport({"rank": 0.0, "isometry": 2e-8}, {"rank": 0.0, "isometry": 1e-8}, 3), scale=10.0)
    document.set_result("theta_mean", np.float64(0.5))
    document.set_result("pass", "ignored")
    data = json.loads(document.to_json())
    assert list(data) == ["scenario", "command", "seed", "samples", "checks", "pass", "theta_mean"]
    assert data["pass"] is True
    assert data["checks"][1]["tolerance"] == pytest.approx(1e-7)
    assert data["theta_mean"] == 0.5


def test_non_finite_results_fail_the_document():
    document = ReportDocument("e3", "tension", 1, 1)
    document.set_result("tension_norm_max", float("nan"))
    assert not document.passed
    data = json.loads(document.to_json())
    assert data["tension_norm_max"] is None
    assert data["checks"][0]["name"] == "finite-tension_norm_max"


def test_encode_keeps_insertion_order():
    text = encode({"b": [1, 2.5], "a": {"z": True, "y": None}, "c": []})
    assert list(json.loads(text)) == ["b", "a", "c"]
    assert '"z": true' in text


def test_text_rendering():
    document = ReportDocument("e3", "slant-angle", 42, 3)
    document.add_defect("slant-constancy", 2e-7, 1e-6, provenance="derived:slant-decomposition")
    document.add_error("NotProperSlant", NotProperSlant("verdict is invariant"))
    document.set_result("verdict", "invariant")
    text = document.to_text()
    assert "PASS  slant-constancy" in text
    assert "[derived:slant-decomposition]" in text
    assert "FAIL  NotProperSlant" in text
    assert "verdict: invariant" in text
    assert text.endswith("result: FAIL\n")
