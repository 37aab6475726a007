from typing import Any

from jinja2 import Template

from ordered_harmonics.checks import CheckResult, CheckStatus
from ordered_harmonics.reports.base import Report
from ordered_harmonics.worked_examples import WorkedExample


class VerifyReport(Report):
    """Check results of one verification run, grouped by order context."""

    def __init__(
        self, results: dict[str, list[CheckResult]], run_config: dict[str, Any]
    ) -> None:
        super().__init__()
        self.results = results
        self.run_config = run_config

    @property
    def summary_template(self) -> Template:
        """Jinja template for report summary."""
        return self.jinja_env.get_template("verify_summary.txt")

    @property
    def passed(self) -> bool:
        return not any(
            result.failed for results in self.results.values() for result in results
        )

    def count(self, status: CheckStatus) -> int:
        return sum(
            result.status == status
            for results in self.results.values()
            for result in results
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "config": self.run_config,
            "passed": self.passed,
            "contexts": {
                label: [result.to_dict() for result in results]
                for label, results in self.results.items()
            },
        }

    def summary_rows(self) -> list[dict[str, Any]]:
        return [
            {
                "context": label,
                "check": result.name,
                "status": str(result.status),
                "cases": result.cases,
                "failures": len(result.failures),
                "worst": result.worst,
            }
            for label, results in self.results.items()
            for result in results
        ]

    def generate_summary(self) -> str:
        return self.summary_template.render(
            report_date=self.report_date,
            results=self.results,
            passed=self.count(CheckStatus.PASSED),
            failed=self.count(CheckStatus.FAILED),
            skipped=self.count(CheckStatus.SKIPPED),
        )


class DemoReport(Report):
    def __init__(self, examples: list[WorkedExample]) -> None:
        super().__init__()
        self.examples = examples

    @property
    def summary_template(self) -> Template:
        """Jinja template for report summary."""
        return self.jinja_env.get_template("demo_summary.txt")

    @property
    def passed(self) -> bool:
        return all(example.matches for example in self.examples)

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "examples": [example.to_dict() for example in self.examples],
        }

    def summary_rows(self) -> list[dict[str, Any]]:
        return [
            {"example": example.name, "matches": example.matches}
            for example in self.examples
        ]

    def generate_summary(self) -> str:
        return self.summary_template.render(
            report_date=self.report_date,
            examples=[example.to_dict() for example in self.examples],
        )
