import json
from io import StringIO

import pandas as pd
import pytest
from freezegun import freeze_time

from ordered_harmonics.bmo import sandwich_verify
from ordered_harmonics.checks import CheckResult, CheckStatus, run_checks
from ordered_harmonics.exceptions import NoMinimalPositiveError
from ordered_harmonics.reports import (
    BmoSandwichReport,
    DemoReport,
    HankelNormReport,
    OutputFormat,
    VerifyReport,
)
from ordered_harmonics.trigpoly import TrigPoly
from ordered_harmonics.worked_examples import worked_examples


@pytest.fixture
def verify_report():
    results = {
        "lex-n1": [
            CheckResult("hilbert-multiplier", "", CheckStatus.PASSED, cases=4),
            CheckResult("worked-examples", "", CheckStatus.SKIPPED, detail="n = 2"),
        ],
        "lex-n2": [
            CheckResult(
                "seminorm-chain",
                "",
                CheckStatus.FAILED,
                cases=2,
                failures=["chain #1"],
                worst=0.5,
            )
        ],
    }
    return VerifyReport(results, run_config={"seed": 0})


@freeze_time("2025-01-01 09:00:00")
def test_report_init_success(verify_report):
    report = VerifyReport(verify_report.results, verify_report.run_config)
    assert report.report_date == "20250101T090000Z"


def test_verify_report_counts(verify_report):
    assert not verify_report.passed
    assert verify_report.count(CheckStatus.PASSED) == 1
    assert verify_report.count(CheckStatus.SKIPPED) == 1
    assert verify_report.count(CheckStatus.FAILED) == 1


def test_verify_report_to_json_is_deterministic(verify_report):
    data = json.loads(verify_report.to_json())
    assert data["config"] == {"seed": 0}
    assert not data["passed"]
    assert data["contexts"]["lex-n2"][0]["failures"] == ["chain #1"]
    assert "report_date" not in verify_report.to_json()
    again = VerifyReport(verify_report.results, verify_report.run_config)
    assert again.to_json() == verify_report.to_json()


def test_verify_report_to_csv(verify_report):
    frame = pd.read_csv(StringIO(verify_report.to_csv()))
    assert list(frame.columns) == [
        "context",
        "check",
        "status",
        "cases",
        "failures",
        "worst",
    ]
    assert len(frame) == 3  # noqa: PLR2004


@freeze_time("2025-01-01 09:00:00")
def test_verify_report_generate_summary(verify_report):
    report = VerifyReport(verify_report.results, verify_report.run_config)
    summary = report.generate_summary()
    assert "Run date: 20250101T090000Z" in summary
    assert "Context: lex-n2" in summary
    assert "- chain #1" in summary
    assert "(n = 2)" in summary
    assert "Failed: 1" in summary


def test_verify_report_from_check_run(lex1_context):
    report = VerifyReport(
        {lex1_context.label: run_checks(lex1_context, ["hilbert-multiplier"])}, {}
    )
    assert report.passed
    assert "Passed: 1" in report.render(OutputFormat.TEXT)


def test_report_write(tmp_path, verify_report):
    path = str(tmp_path / "report.json")
    verify_report.write(path, OutputFormat.JSON)
    with open(path) as report_file:
        assert json.load(report_file) == verify_report.to_dict()


def test_hankel_norm_report(lex1, chi_minus_1, grid1):
    report = HankelNormReport.compute(lex1, chi_minus_1, grid1)
    assert report.passed
    assert report.values["hankel_norm"] == pytest.approx(1.0)
    assert report.values["conj_hankel_norm"] == 0.0
    assert report.values["sup_norm"] == pytest.approx(1.0)
    assert report.values["gamma_norm"] is None
    data = report.to_dict()
    assert data["nehari_bound_holds"]
    assert data["rows"] == 1
    assert [row["quantity"] for row in report.summary_rows()] == [
        "hankel_norm",
        "conj_hankel_norm",
        "seminorm",
        "sup_norm",
    ]


def test_hankel_norm_report_gamma_form(lex1, grid1):
    phi = TrigPoly(1, {(-1,): 1, (-2,): 1})
    report = HankelNormReport.compute(lex1, phi, grid1, gamma_form=True)
    assert report.values["gamma_norm"] == pytest.approx(report.values["hankel_norm"])
    assert "‖Γ‖ (lower bound)" in report.generate_summary()


def test_hankel_norm_report_gamma_form_functional_raises_error(
    functional2, mixed_poly2, grid2
):
    with pytest.raises(NoMinimalPositiveError):
        HankelNormReport.compute(functional2, mixed_poly2, grid2, gamma_form=True)


def test_hankel_norm_report_summary(lex1, sin_poly, grid1):
    summary = HankelNormReport.compute(lex1, sin_poly, grid1).generate_summary()
    assert "‖H_φ‖ (lower bound): 0.5" in summary
    assert "held" in summary


def test_bmo_sandwich_report(lex1, grid1):
    phi = TrigPoly(1, {(-1,): 1, (1,): 1})
    report = BmoSandwichReport(sandwich_verify(lex1, phi, grid1))
    assert report.passed
    assert {row["inequality"] for row in report.summary_rows()} >= {
        "chain_star",
        "chain_def2",
    }
    summary = report.generate_summary()
    assert "BMO sandwich report" in summary
    assert "Analytic: no" in summary


def test_demo_report():
    report = DemoReport(worked_examples())
    assert report.passed
    assert len(report.summary_rows()) == len(report.examples)
    assert "MISMATCH" not in report.generate_summary()
