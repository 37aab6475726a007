from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ordered_harmonics.checks.base import (
    IDENTITY_TOLERANCE,
    Check,
    coefficient_error,
)
from ordered_harmonics.ordered_group import Box, Comparison, zero_index
from ordered_harmonics.transforms import (
    analytic_completion,
    conjugate_from_projections,
    hilbert,
    is_real,
    mean_value,
    p_minus,
    p_plus,
    projections_from_hilbert,
)
from ordered_harmonics.trigpoly import TrigPoly

if TYPE_CHECKING:  # pragma: no cover
    from ordered_harmonics.checks.base import VerifyContext
    from ordered_harmonics.ordered_group import OrderSpec
    from ordered_harmonics.trigpoly import GridSpec

# grid samples carry rounding from the roots of unity and the FFT
SAMPLED_TOLERANCE = 1e-10


class HilbertMultiplierCheck(Check):
    check_name = "hilbert-multiplier"
    description = "conjugate function has multiplier -i·sgn and matches the projections"

    def verify(self, context: VerifyContext) -> None:
        order = context.order
        for index, f in enumerate(context.corpus):
            conjugate = hilbert(order, f)
            self.record(
                f"multiplier #{index}",
                coefficient_error(conjugate, sampled_conjugate(order, f, context.grid)),
                SAMPLED_TOLERANCE,
            )
            self.record(
                f"from projections #{index}",
                coefficient_error(conjugate_from_projections(order, f), conjugate),
                IDENTITY_TOLERANCE,
            )


def sampled_conjugate(order: OrderSpec, f: TrigPoly, grid: GridSpec) -> TrigPoly:
    """Conjugate function built from grid samples of f instead of its coefficients.

    Coefficients are recovered with an n-dimensional FFT on a grid that resolves f
    and multiplied by -i, 0 or i as k compares greater, equal or less than zero.
    """
    while not grid.resolves(f):
        grid = grid.refine()
    m = grid.points_per_dim
    spectrum = np.fft.fftn(f.evaluate_grid(grid).reshape((m,) * f.n)) / grid.size
    zero = zero_index(f.n)
    multiplier = {Comparison.GREATER: -1j, Comparison.EQUAL: 0j, Comparison.LESS: 1j}
    return TrigPoly(
        f.n,
        {
            k: multiplier[order.compare(k, zero)] * spectrum[tuple(a % m for a in k)]
            for k in Box.symmetric(f.n, f.max_degree()).points()
        },
    )


class ProjectionAlgebraCheck(Check):
    check_name = "projection-algebra"
    description = "P± are complementary orthogonal idempotents"

    def verify(self, context: VerifyContext) -> None:
        order = context.order
        corpus = context.corpus
        for index, (f, g) in enumerate(zip(corpus, corpus[1:] + corpus[:1], strict=True)):
            plus, minus = p_plus(order, f), p_minus(order, f)
            self.record(
                f"P₊² #{index}",
                coefficient_error(p_plus(order, plus), plus),
                IDENTITY_TOLERANCE,
            )
            self.record(
                f"P₋² #{index}",
                coefficient_error(p_minus(order, minus), minus),
                IDENTITY_TOLERANCE,
            )
            self.record(
                f"P₊ + P₋ #{index}",
                coefficient_error(plus + minus, f),
                IDENTITY_TOLERANCE,
            )
            scale = max(1.0, f.l2_norm() * g.l2_norm())
            self.record(
                f"orthogonality #{index}",
                abs(plus.inner(p_minus(order, g))) / scale,
                IDENTITY_TOLERANCE,
            )


class ProjectionsFromHilbertCheck(Check):
    check_name = "projections-from-hilbert"
    description = "P±h recovered from h and its conjugate function"

    def verify(self, context: VerifyContext) -> None:
        order = context.order
        for index, h in enumerate(context.corpus):
            minus, plus = projections_from_hilbert(order, h)
            self.record(
                f"P₋ #{index}",
                coefficient_error(minus, p_minus(order, h)),
                IDENTITY_TOLERANCE,
            )
            self.record(
                f"P₊ #{index}",
                coefficient_error(plus, p_plus(order, h)),
                IDENTITY_TOLERANCE,
            )


class AnalyticCompletionCheck(Check):
    check_name = "analytic-completion"
    description = "u + i·ũ is analytic with real part u for real u"

    def verify(self, context: VerifyContext) -> None:
        order = context.order
        for index, f in enumerate(context.corpus):
            u = (f + f.conj()).scale(0.5)
            self.expect(f"real conjugate #{index}", condition=is_real(hilbert(order, u)))
            completion = analytic_completion(order, u)
            self.record(
                f"analytic #{index}",
                coefficient_error(p_minus(order, completion), TrigPoly.zero(f.n)),
                IDENTITY_TOLERANCE,
            )
            real_part = (completion + completion.conj()).scale(0.5)
            self.record(
                f"real part #{index}",
                coefficient_error(real_part, u),
                IDENTITY_TOLERANCE,
            )


class L2ContractionCheck(Check):
    check_name = "l2-contraction"
    description = "‖f̃‖₂² = ‖f‖₂² - |f̂(𝟏)|² and the projections contract L²"

    def verify(self, context: VerifyContext) -> None:
        order = context.order
        for index, f in enumerate(context.corpus):
            norm = f.l2_norm()
            scale = max(1.0, norm**2)
            expected = norm**2 - abs(mean_value(f)) ** 2
            self.record(
                f"isometry modulo constants #{index}",
                abs(hilbert(order, f).l2_norm() ** 2 - expected) / scale,
                IDENTITY_TOLERANCE,
            )
            for name, projection in (("P₊", p_plus), ("P₋", p_minus)):
                excess = projection(order, f).l2_norm() - norm
                self.record(
                    f"{name} contraction #{index}",
                    max(excess, 0.0) / max(1.0, norm),
                    IDENTITY_TOLERANCE,
                )
