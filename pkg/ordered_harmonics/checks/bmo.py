from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ordered_harmonics.bmo import (
    analytic_part_witness,
    bounded_symbol_witness,
    conj_closure_witness,
    conj_star_identity,
    def2_upper,
    from_star,
    hankel_seminorm,
    sandwich_verify,
    split_analytic_coanalytic,
    star_bmoa_upper_optimize,
    star_decomposition,
    star_upper_optimize,
    to_star,
)
from ordered_harmonics.checks.base import (
    IDENTITY_TOLERANCE,
    Check,
    coefficient_error,
    matrix_error,
)
from ordered_harmonics.exceptions import NoMinimalPositiveError
from ordered_harmonics.hankel import (
    TruncationBoxes,
    gamma_kernel,
    gamma_matrix,
    hankel_matrix,
    operator_norm,
    unitary_transfer,
)
from ordered_harmonics.ordered_group import Box, OrderKind
from ordered_harmonics.transforms import hilbert, mean_value, p_minus, p_plus
from ordered_harmonics.trigpoly import TrigPoly
from ordered_harmonics.worked_examples import worked_examples

if TYPE_CHECKING:  # pragma: no cover
    from collections.abc import Callable, Iterator

    from ordered_harmonics.checks.base import VerifyContext

CONSTANT_SHIFTS = 10
# agreement of grid maxima that are rearrangements of each other
SUP_TOLERANCE = 1e-9
# seminorm axioms compare independent power iterations
SEMINORM_TOLERANCE = 1e-6


def _pairs(context: VerifyContext) -> Iterator[tuple[int, TrigPoly, TrigPoly]]:
    corpus = context.corpus
    partners = corpus[1:] + corpus[:1]
    for index, (f, g) in enumerate(zip(corpus, partners, strict=True)):
        yield index, f, g


class StarConversionCheck(Check):
    check_name = "star-conversions"
    description = "def2 and star witnesses convert exactly with inflation 2 and 3/2"

    def verify(self, context: VerifyContext) -> None:
        order, grid, slack = context.order, context.grid, context.slack
        for index, f, g in _pairs(context):
            def2 = def2_upper(order, f, g, grid)
            star = star_decomposition(order, *to_star(order, f, g), grid)
            self.record(
                f"to_star reconstruction #{index}",
                coefficient_error(star.phi, def2.phi),
                IDENTITY_TOLERANCE,
            )
            self.expect(
                f"to_star inflation #{index}",
                condition=star.bound <= 2 * def2.bound * (1 + slack) + 1e-12,
            )

            converted = def2_upper(order, *from_star(order, f, g), grid)
            source = star_decomposition(order, f, g, grid)
            self.record(
                f"from_star reconstruction #{index}",
                coefficient_error(converted.phi, source.phi),
                IDENTITY_TOLERANCE,
            )
            self.expect(
                f"from_star inflation #{index}",
                condition=converted.bound <= 1.5 * source.norm_sum * (1 + slack) + 1e-12,
            )
            round_trip = star_decomposition(
                order, *to_star(order, converted.first, converted.second), grid
            )
            self.record(
                f"round trip #{index}",
                coefficient_error(round_trip.phi, source.phi),
                IDENTITY_TOLERANCE,
            )


class ConjugateClosureCheck(Check):
    check_name = "conjugate-closure"
    description = "reflected witnesses decompose conj(φ) with the same sup-norms"

    def verify(self, context: VerifyContext) -> None:
        order, grid = context.order, context.grid
        for index, f, g in _pairs(context):
            source = star_decomposition(order, f, g, grid)
            witness = conj_closure_witness(order, source)
            conjugate = source.phi.conj()
            self.record(
                f"witness reconstruction #{index}",
                coefficient_error(witness.phi, conjugate),
                IDENTITY_TOLERANCE,
            )
            self.record(
                f"identity #{index}",
                coefficient_error(conj_star_identity(order, f, g), conjugate),
                IDENTITY_TOLERANCE,
            )
            scale = max(1.0, source.second_norm)
            self.record(
                f"reflected sup-norm #{index}",
                abs(witness.first_norm - source.second_norm) / scale,
                SUP_TOLERANCE,
            )
            shift = abs(mean_value(g) - mean_value(f))
            excess = abs(witness.second_norm - source.first_norm) - shift
            self.record(
                f"shifted sup-norm #{index}",
                max(excess, 0.0) / max(1.0, source.first_norm),
                SUP_TOLERANCE,
            )


class AnalyticPartCheck(Check):
    check_name = "analytic-part"
    description = "P₊ of a decomposition is a star decomposition without f₁"

    def verify(self, context: VerifyContext) -> None:
        order, grid = context.order, context.grid
        for index, f, g in _pairs(context):
            for source in (
                star_decomposition(order, f, g, grid),
                def2_upper(order, f, g, grid),
            ):
                witness = analytic_part_witness(order, source)
                label = f"{source.style} #{index}"
                self.record(
                    f"reconstruction {label}",
                    coefficient_error(witness.phi, p_plus(order, source.phi)),
                    IDENTITY_TOLERANCE,
                )
                self.expect(f"f₁ absent {label}", condition=witness.first.is_zero())
            star = star_decomposition(order, f, g, grid)
            self.expect(
                f"bound #{index}",
                condition=analytic_part_witness(order, star).bound <= star.bound,
            )


class BoundedSymbolCheck(Check):
    check_name = "bounded-symbol"
    description = "H_φ has a bounded symbol and φ splits into analytic and co-analytic"

    def verify(self, context: VerifyContext) -> None:
        order, grid, slack = context.order, context.grid, context.slack
        for index, f, g in _pairs(context):
            phi = f + hilbert(order, g)
            psi = bounded_symbol_witness(order, f, g)
            self.record(
                f"negative part #{index}",
                coefficient_error(p_minus(order, psi), p_minus(order, phi)),
                IDENTITY_TOLERANCE,
            )
            boxes = TruncationBoxes.for_symbol(order, phi)
            norm = operator_norm(
                hankel_matrix(order, phi, boxes.neg_rows, boxes.pos_cols), context.tol
            ).value
            self.expect(
                f"nehari bound #{index}",
                condition=norm <= psi.sup_norm_lower(grid) * (1 + slack) + 1e-12,
            )

            f1, f2 = split_analytic_coanalytic(order, phi)
            self.record(
                f"split reconstruction #{index}",
                coefficient_error(f1 + f2.conj(), phi),
                IDENTITY_TOLERANCE,
            )
            self.expect(
                f"split analytic #{index}",
                condition=p_minus(order, f1).is_zero() and p_minus(order, f2).is_zero(),
            )
            for label, symbol, replacement in (
                ("H_φ", phi, f2.conj()),
                ("H_φ̄", phi.conj(), f1.conj()),
            ):
                rows, cols = boxes.neg_rows, boxes.pos_cols
                self.record(
                    f"{label} symbol #{index}",
                    matrix_error(
                        hankel_matrix(order, symbol, rows, cols).entries,
                        hankel_matrix(order, replacement, rows, cols).entries,
                    ),
                    IDENTITY_TOLERANCE,
                )


class SeminormAxiomsCheck(Check):
    check_name = "seminorm-axioms"
    description = "‖·‖_H is homogeneous, subadditive, blind to constants, zero on ℂ·𝟏"
    requires_minimal_positive = True

    def verify(self, context: VerifyContext) -> None:
        order = context.order
        rng = np.random.default_rng(context.seed)
        for index, phi, psi in _pairs(context):
            radius = max(phi.max_degree(), psi.max_degree(), 1)
            boxes = TruncationBoxes.for_box(order, Box.symmetric(order.n, radius))
            value = hankel_seminorm(order, phi, boxes, context.tol).value

            c = complex(rng.standard_normal(), rng.standard_normal())
            scaled = hankel_seminorm(order, phi.scale(c), boxes, context.tol).value
            self.record(
                f"homogeneity #{index}",
                abs(scaled - abs(c) * value) / max(1.0, abs(c) * value),
                SEMINORM_TOLERANCE,
            )
            other = hankel_seminorm(order, psi, boxes, context.tol).value
            total = hankel_seminorm(order, phi + psi, boxes, context.tol).value
            self.record(
                f"triangle #{index}",
                max(total - value - other, 0.0) / max(1.0, value + other),
                SEMINORM_TOLERANCE,
            )
            if index < CONSTANT_SHIFTS:
                shifted = phi + TrigPoly.constant(phi.n, c)
                self.expect(
                    f"constant invariance #{index}",
                    condition=hankel_seminorm(order, shifted, boxes, context.tol).value
                    == value,
                )
            constant = phi.restrict(lambda k: not any(k))
            self.expect(
                f"null space #{index}",
                condition=(value == 0) == (coefficient_error(phi, constant) == 0),
            )
            self.expect(
                f"constant is null #{index}",
                condition=hankel_seminorm(order, constant, boxes, context.tol).value == 0,
            )


class SeminormChainCheck(Check):
    check_name = "seminorm-chain"
    description = "‖φ‖_H ≤ 2·star bound ≤ 4·def2 bound over the corpus"
    requires_minimal_positive = True

    def verify(self, context: VerifyContext) -> None:
        order, grid = context.order, context.grid
        for index, phi in enumerate(context.corpus):
            report = sandwich_verify(
                order, phi, grid, slack=context.slack, tol=context.tol
            )
            for verdict in report.verdicts:
                self.record(
                    f"{verdict.name} #{index}",
                    verdict.lhs - verdict.rhs * (1 + verdict.slack),
                    1e-12,
                )
            self.expect(
                f"sup-norm embedding #{index}",
                condition=def2_upper(order, phi, TrigPoly.zero(phi.n), grid).bound
                <= phi.sup_norm_lower(grid),
            )


class StarOptimizerCheck(Check):
    check_name = "star-optimizer"
    description = "the subgradient solver improves on its start and respects ‖φ‖_H/2"
    requires_minimal_positive = True

    def verify(self, context: VerifyContext) -> None:
        order, grid, slack = context.order, context.grid, context.slack
        chi_1 = order.minimal_positive()
        fixed = [TrigPoly.zero(order.n), TrigPoly.character(chi_1)]
        for index, phi in enumerate(fixed + context.corpus[: context.solver_cases]):
            start = star_decomposition(
                order, p_minus(order, phi), p_plus(order, phi), grid
            )
            result = star_upper_optimize(order, phi, grid, solver=context.solver)
            seminorm = hankel_seminorm(order, phi, tol=context.tol).value
            self.record(
                f"reconstruction #{index}",
                coefficient_error(result.phi, phi),
                IDENTITY_TOLERANCE,
            )
            self.expect(
                f"no worse than start #{index}", condition=result.bound <= start.bound
            )
            self.expect(
                f"above half seminorm #{index}",
                condition=seminorm <= 2 * result.bound * (1 + slack) + 1e-12,
            )

            analytic = p_plus(order, phi)
            bmoa = star_bmoa_upper_optimize(order, analytic, grid, solver=context.solver)
            self.record(
                f"analytic reconstruction #{index}",
                coefficient_error(bmoa.phi, analytic),
                IDENTITY_TOLERANCE,
            )
            conj_norm = hankel_seminorm(order, analytic, tol=context.tol).conj_hankel_norm
            self.expect(
                f"analytic bound #{index}",
                condition=conj_norm <= bmoa.second_norm * (1 + slack) + 1e-12,
            )


class HypothesisGatingCheck(Check):
    check_name = "hypothesis-gating"
    description = "operations built on χ₁ refuse orders without a least positive element"

    def verify(self, context: VerifyContext) -> None:
        order, grid = context.order, context.grid
        phi = context.corpus[0] if context.corpus else TrigPoly.character((0,) * order.n)
        box = Box.symmetric(order.n, 1)
        boxes = TruncationBoxes.for_box(order, box)
        gated: dict[str, Callable[[], object]] = {
            "minimal_positive": order.minimal_positive,
            "j_map": lambda: order.j_map((0,) * order.n),
            "j_map_inverse": lambda: order.j_map_inverse((0,) * (order.n - 1) + (-1,)),
            "gamma_kernel": lambda: gamma_kernel(order, phi),
            "unitary_transfer": lambda: unitary_transfer(
                order, gamma_matrix(order, {}, box)
            ),
            "hankel_seminorm": lambda: hankel_seminorm(order, phi),
            "sandwich_verify": lambda: sandwich_verify(order, phi, grid),
        }
        ungated: dict[str, Callable[[], object]] = {
            "hilbert": lambda: hilbert(order, phi),
            "hankel_matrix": lambda: hankel_matrix(
                order, phi, boxes.neg_rows, boxes.pos_cols
            ),
            "def2_upper": lambda: def2_upper(order, phi, phi, grid),
        }
        refuses = order.kind == OrderKind.FUNCTIONAL
        for name, operation in gated.items():
            self.expect(
                f"{name} refusal matches order",
                condition=self._refused(operation) == refuses,
            )
        for name, operation in ungated.items():
            self.expect(
                f"{name} runs under any order", condition=not self._refused(operation)
            )

    @staticmethod
    def _refused(operation: Callable[[], object]) -> bool:
        try:
            operation()
        except NoMinimalPositiveError:
            return True
        return False


class WorkedExamplesCheck(Check):
    check_name = "worked-examples"
    description = "hand-checkable one-variable examples reproduce their values"

    def applies_to(self, context: VerifyContext) -> str | None:
        if context.order.kind != OrderKind.LEX or context.order.n != 1:
            return "examples run once, with the lexicographic n = 1 context"
        return None

    def verify(self, context: VerifyContext) -> None:  # noqa: ARG002
        for example in worked_examples():
            self.expect(
                f"{example.name}: expected {example.expected}, got {example.actual}",
                condition=example.matches,
            )
