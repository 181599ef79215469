import json

from pseudoboson import CheckReport, ResidualRecord, format_report_table, reports_to_json


def test_residual_record_pass_flag():
    assert ResidualRecord(check="x", n=0, residual=1e-12, tolerance=1e-9).passed
    assert not ResidualRecord(check="x", n=0, residual=1e-6, tolerance=1e-9).passed


def test_table_summary_counts():
    reports = [
        CheckReport(check_id="a", residual=0.0, tolerance=1e-9, status="pass"),
        CheckReport(check_id="b", residual=1.0, tolerance=1e-9, status="fail"),
        CheckReport(check_id="c", residual=0.5, tolerance=1e-9, status="out-of-regime"),
    ]
    table = format_report_table(reports)
    assert "3 checks: 1 pass, 1 fail, 1 out-of-regime" in table
    assert table.count("\n") >= 5


def test_json_roundtrip():
    reports = [
        CheckReport(check_id="a", params={"z": "1+0j"}, residual=1e-12,
                    tolerance=1e-9, status="pass", wall_time=0.25)
    ]
    records = json.loads(reports_to_json(reports))
    assert records == [
        {
            "check_id": "a",
            "params": {"z": "1+0j"},
            "residual": 1e-12,
            "tolerance": 1e-9,
            "status": "pass",
            "wall_time": 0.25,
        }
    ]
