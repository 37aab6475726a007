from __future__ import annotations

from typing import TYPE_CHECKING, Any

from ordered_harmonics.bmo import ABSOLUTE_TOLERANCE, DEFAULT_SLACK
from ordered_harmonics.hankel import (
    DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
    TruncationBoxes,
    gamma_kernel,
    gamma_matrix,
    hankel_matrix,
    operator_norm,
)
from ordered_harmonics.reports.base import Report

if TYPE_CHECKING:  # pragma: no cover
    from jinja2 import Template

    from ordered_harmonics.bmo import BmoReport
    from ordered_harmonics.ordered_group import OrderSpec
    from ordered_harmonics.trigpoly import GridSpec, TrigPoly


class HankelNormReport(Report):
    """Truncated Hankel norms of a symbol with the Nehari upper-bound check."""

    def __init__(
        self,
        order: OrderSpec,
        phi: TrigPoly,
        boxes: TruncationBoxes,
        values: dict[str, float | None],
        slack: float,
    ) -> None:
        super().__init__()
        self.order = order
        self.phi = phi
        self.boxes = boxes
        self.values = values
        self.slack = slack

    @classmethod
    def compute(
        cls,
        order: OrderSpec,
        phi: TrigPoly,
        grid: GridSpec,
        boxes: TruncationBoxes | None = None,
        tol: float = DEFAULT_TOL,
        max_iters: int = DEFAULT_MAX_ITERS,
        slack: float = DEFAULT_SLACK,
        *,
        gamma_form: bool = False,
    ) -> HankelNormReport:
        """Compute ‖H_φ‖, ‖H_φ̄‖ and the grid estimate of ‖φ‖∞.

        With 'gamma_form' the norm is also computed in the matrix realization on the
        positive cone.

        Raises:
            NoMinimalPositiveError: If 'gamma_form' is requested for an order without
                a least positive element.
        """
        if boxes is None:
            boxes = TruncationBoxes.for_symbol(order, phi)
        rows, cols = boxes.neg_rows, boxes.pos_cols
        hankel_norm = operator_norm(
            hankel_matrix(order, phi, rows, cols), tol, max_iters
        ).value
        conj_norm = operator_norm(
            hankel_matrix(order, phi.conj(), rows, cols), tol, max_iters
        ).value
        gamma_norm = None
        if gamma_form:
            gamma = gamma_matrix(order, gamma_kernel(order, phi), cols)
            gamma_norm = operator_norm(gamma, tol, max_iters).value
        values: dict[str, float | None] = {
            "hankel_norm": hankel_norm,
            "conj_hankel_norm": conj_norm,
            "seminorm": hankel_norm + conj_norm,
            "sup_norm": phi.sup_norm_lower(grid),
            "gamma_norm": gamma_norm,
        }
        return cls(order=order, phi=phi, boxes=boxes, values=values, slack=slack)

    @property
    def summary_template(self) -> Template:
        """Jinja template for report summary."""
        return self.jinja_env.get_template("hankel_norm_summary.txt")

    @property
    def passed(self) -> bool:
        """Nehari upper bound ‖H_φ‖ ≤ ‖φ‖∞ with grid slack."""
        hankel_norm = self.values["hankel_norm"] or 0.0
        sup_norm = self.values["sup_norm"] or 0.0
        return hankel_norm <= sup_norm * (1 + self.slack) + ABSOLUTE_TOLERANCE

    def to_dict(self) -> dict[str, Any]:
        return {
            "order": self.order.to_dict(),
            "phi": self.phi.to_symbol_dict(self.order),
            "rows": len(self.boxes.neg_rows),
            "cols": len(self.boxes.pos_cols),
            "slack": self.slack,
            "nehari_bound_holds": self.passed,
            **self.values,
        }

    def summary_rows(self) -> list[dict[str, Any]]:
        return [
            {"quantity": name, "value": value}
            for name, value in self.values.items()
            if value is not None
        ]

    def generate_summary(self) -> str:
        return self.summary_template.render(
            report_date=self.report_date,
            order=self.order.to_dict(),
            terms=len(self.phi),
            rows=len(self.boxes.neg_rows),
            cols=len(self.boxes.pos_cols),
            values=self.values,
            passed=self.passed,
            slack=self.slack,
        )


class BmoSandwichReport(Report):
    def __init__(self, bmo_report: BmoReport) -> None:
        super().__init__()
        self.bmo_report = bmo_report

    @property
    def summary_template(self) -> Template:
        """Jinja template for report summary."""
        return self.jinja_env.get_template("bmo_summary.txt")

    @property
    def passed(self) -> bool:
        return self.bmo_report.passed

    def to_dict(self) -> dict[str, Any]:
        return self.bmo_report.to_dict()

    def summary_rows(self) -> list[dict[str, Any]]:
        return [
            {
                "inequality": verdict.name,
                "lhs": verdict.lhs,
                "rhs": verdict.rhs,
                "slack": verdict.slack,
                "passed": verdict.passed,
            }
            for verdict in self.bmo_report.verdicts
        ]

    def generate_summary(self) -> str:
        report = self.bmo_report
        return self.summary_template.render(
            report_date=self.report_date,
            order=report.order.to_dict(),
            terms=len(report.phi),
            seminorm=report.seminorm,
            star_upper=report.star_upper,
            def2_upper=report.def2_upper,
            bmoa=report.bmoa,
            verdicts=report.verdicts,
            trace=report.star.trace,
        )
