import json

import numpy as np
import pytest

from cli.report import FAIL, PASS, SKIPPED, REPORT_SCHEMA_VERSION, Report, environment, run_check, skipped
from core.errors import KernelTooLarge, TooLarge


def test_run_check_statuses():
    assert run_check("a", "x = x", 1e-10, lambda: 0.0).status == PASS
    assert run_check("b", "x = y", 1e-10, lambda: 1e-3).status == FAIL

    def too_big():
        raise TooLarge("30 qubits")

    check = run_check("c", "big", 1e-10, too_big)
    assert check.status == SKIPPED
    assert check.observed_error is None
    assert check.detail == {"reason": "30 qubits", "cap": "TooLarge"}


def test_run_check_detail_and_crash():
    check = run_check("d", "with detail", 1e-8, lambda: (np.float64(2e-9), {"coefficient": 4.0}))
    assert check.status == PASS
    assert check.observed_error == pytest.approx(2e-9)
    assert check.detail == {"coefficient": 4.0}

    check = run_check("e", "crashes", 1e-8, lambda: 1 / 0)
    assert check.status == FAIL
    assert check.detail["reason"].startswith("ZeroDivisionError")


def test_exit_codes():
    report = Report("unit")
    report.add(run_check("a", "", 1.0, lambda: 0.0))
    assert report.exit_code() == 0
    report.add(skipped("b", "", "over the cap"))
    assert report.exit_code() == 3
    report.add(run_check("c", "", 1.0, lambda: 2.0))
    assert report.exit_code() == 1


def test_duplicate_ids_rejected():
    report = Report("unit")
    report.add(run_check("a", "", 1.0, lambda: 0.0))
    with pytest.raises(ValueError):
        report.add(run_check("a", "", 1.0, lambda: 0.0))


def test_report_document():
    def capped():
        raise KernelTooLarge("2^20 surfaces")

    report = Report("unit", environment=environment(7, 2, L=4))
    report.extend([run_check("a", "anchor a", 1e-10, lambda: 0.0),
                   run_check("b", "anchor b", 1e-10, capped)])
    doc = json.loads(report.to_json())
    assert doc["schema"] == REPORT_SCHEMA_VERSION
    assert doc["suite"] == "unit"
    assert doc["summary"] == {PASS: 1, FAIL: 0, SKIPPED: 1}
    assert [c["id"] for c in doc["checks"]] == ["a", "b"]
    assert doc["checks"][0]["anchor"] == "anchor a"
    assert doc["environment"]["seed"] == 7 and doc["environment"]["workers"] == 2
    assert doc["environment"]["L"] == 4
