"""BMO and BMOA norm machinery at truncated scale.

Infimum norms are never computed exactly. Every decomposition gives a sound upper
bound (up to the grid underestimate of sup-norms) and truncated Hankel norms give
sound lower bounds; the sandwich verifier checks each inequality in its sound
direction and reports violations as failures.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np

from ordered_harmonics.exceptions import (
    DimensionMismatchError,
    InequalityViolationError,
    InvalidFreeBoxError,
    NotAnalyticError,
    SolverError,
)
from ordered_harmonics.hankel import (
    DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
    TruncationBoxes,
    hankel_matrix,
    operator_norm,
)
from ordered_harmonics.ordered_group import Box, CharacterIndex, Cone, OrderSpec
from ordered_harmonics.transforms import hilbert, mean_value, p_minus, p_plus
from ordered_harmonics.trigpoly import GridSpec, TrigPoly

logger = logging.getLogger(__name__)

DEFAULT_SLACK = 0.02
FREE_BOX_INFLATION = 2
MAX_FREE_COEFFICIENTS = 4096

# absolute allowance for rounding when both sides of an inequality are near zero
ABSOLUTE_TOLERANCE = 1e-12


class DecompositionStyle(StrEnum):
    DEF2 = "def2"  # φ = f + g̃, bound ‖f‖∞ + ‖g‖∞
    STAR = "star"  # φ = P₋f₁ + P₊g₁, bound max(‖f₁‖∞, ‖g₁‖∞)


@dataclass(frozen=True)
class SolverConfig:
    """Projected subgradient settings: step c/√t scaled by 'step_scale'."""

    iters: int = 2000
    tol: float = 1e-12
    step_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.iters < 0:
            raise ValueError(f"Solver iterations must be non-negative, got {self.iters}")
        if self.tol <= 0 or self.step_scale <= 0:
            raise ValueError("Solver tolerance and step scale must be positive")


@dataclass(frozen=True)
class SolverTrace:
    iterations: int
    initial_objective: float
    final_objective: float
    best_iteration: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "iterations": self.iterations,
            "initial_objective": self.initial_objective,
            "final_objective": self.final_objective,
            "best_iteration": self.best_iteration,
        }


@dataclass(frozen=True)
class BmoDecomposition:
    """A representation of φ by two polynomials plus the norm bound it induces.

    For the def2 style 'first' and 'second' are f and g; for the star style they are
    f₁ and g₁.
    """

    style: DecompositionStyle
    first: TrigPoly
    second: TrigPoly
    phi: TrigPoly
    first_norm: float
    second_norm: float
    grid: GridSpec
    trace: SolverTrace | None = field(default=None, compare=False)

    @property
    def bound(self) -> float:
        if self.style == DecompositionStyle.DEF2:
            return self.first_norm + self.second_norm
        return max(self.first_norm, self.second_norm)

    @property
    def norm_sum(self) -> float:
        return self.first_norm + self.second_norm

    def reconstruct(self, order: OrderSpec) -> TrigPoly:
        if self.style == DecompositionStyle.DEF2:
            return self.first + hilbert(order, self.second)
        return p_minus(order, self.first) + p_plus(order, self.second)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "style": str(self.style),
            "bound": self.bound,
            "first_norm": self.first_norm,
            "second_norm": self.second_norm,
            "grid": {"points_per_dim": self.grid.points_per_dim, "n": self.grid.n},
            "first": self.first.to_symbol_dict(),
            "second": self.second.to_symbol_dict(),
        }
        if self.trace is not None:
            data["solver"] = self.trace.to_dict()
        return data


@dataclass(frozen=True)
class SeminormResult:
    """Truncated ‖φ‖_H = ‖H_φ̄‖ + ‖H_φ‖; 'analytic_norm' is ‖H_φ̄‖ for analytic φ."""

    hankel_norm: float
    conj_hankel_norm: float
    analytic_norm: float | None
    boxes: TruncationBoxes = field(repr=False)

    @property
    def value(self) -> float:
        return self.conj_hankel_norm + self.hankel_norm

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "hankel_norm": self.hankel_norm,
            "conj_hankel_norm": self.conj_hankel_norm,
            "analytic_norm": self.analytic_norm,
            "rows": len(self.boxes.neg_rows),
            "cols": len(self.boxes.pos_cols),
        }


@dataclass(frozen=True)
class BmoaReport:
    analytic: bool
    conj_hankel_norm: float
    seminorm: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "analytic": self.analytic,
            "conj_hankel_norm": self.conj_hankel_norm,
            "seminorm": self.seminorm,
        }


@dataclass(frozen=True)
class InequalityVerdict:
    """Outcome of checking lhs ≤ rhs·(1 + slack)."""

    name: str
    lhs: float
    rhs: float
    slack: float
    passed: bool

    @classmethod
    def check(cls, name: str, lhs: float, rhs: float, slack: float) -> InequalityVerdict:
        passed = lhs <= rhs * (1 + slack) + ABSOLUTE_TOLERANCE
        return cls(name=name, lhs=lhs, rhs=rhs, slack=slack, passed=passed)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class BmoReport:
    phi: TrigPoly
    order: OrderSpec
    seminorm: SeminormResult
    def2: BmoDecomposition
    star: BmoDecomposition
    star_constructive: BmoDecomposition
    bmoa: BmoaReport
    analytic_star: BmoDecomposition | None
    verdicts: list[InequalityVerdict]
    slack: float

    @property
    def hankel_seminorm_lower(self) -> float:
        return self.seminorm.value

    @property
    def star_upper(self) -> float:
        return self.star.bound

    @property
    def def2_upper(self) -> float:
        return self.def2.bound

    @property
    def passed(self) -> bool:
        return all(verdict.passed for verdict in self.verdicts)

    def failures(self) -> list[str]:
        return [verdict.name for verdict in self.verdicts if not verdict.passed]

    def raise_for_failures(self) -> None:
        if failures := self.failures():
            raise InequalityViolationError(failures)

    def to_dict(self) -> dict[str, Any]:
        return {
            "order": self.order.to_dict(),
            "phi": self.phi.to_symbol_dict(self.order),
            "hankel_seminorm_lower": self.hankel_seminorm_lower,
            "star_upper": self.star_upper,
            "def2_upper": self.def2_upper,
            "seminorm": self.seminorm.to_dict(),
            "bmoa": self.bmoa.to_dict(),
            "slack": self.slack,
            "passed": self.passed,
            "verdicts": [verdict.to_dict() for verdict in self.verdicts],
            "witnesses": {
                "def2": self.def2.to_dict(),
                "star": self.star.to_dict(),
                "star_constructive": self.star_constructive.to_dict(),
                "analytic_star": (
                    self.analytic_star.to_dict() if self.analytic_star else None
                ),
            },
        }


def _check_dimension(order: OrderSpec, *polys: TrigPoly) -> None:
    for poly in polys:
        if poly.n != order.n:
            raise DimensionMismatchError(expected=order.n, actual=poly.n)


def def2_upper(
    order: OrderSpec, f: TrigPoly, g: TrigPoly, grid: GridSpec
) -> BmoDecomposition:
    """Decomposition φ = f + g̃ with bound ‖f‖∞ + ‖g‖∞ estimated on the grid."""
    _check_dimension(order, f, g)
    return BmoDecomposition(
        style=DecompositionStyle.DEF2,
        first=f,
        second=g,
        phi=f + hilbert(order, g),
        first_norm=f.sup_norm_lower(grid),
        second_norm=g.sup_norm_lower(grid),
        grid=grid,
    )


def star_decomposition(
    order: OrderSpec,
    f1: TrigPoly,
    g1: TrigPoly,
    grid: GridSpec,
    trace: SolverTrace | None = None,
) -> BmoDecomposition:
    """Decomposition φ = P₋f₁ + P₊g₁ with bound max(‖f₁‖∞, ‖g₁‖∞)."""
    _check_dimension(order, f1, g1)
    return BmoDecomposition(
        style=DecompositionStyle.STAR,
        first=f1,
        second=g1,
        phi=p_minus(order, f1) + p_plus(order, g1),
        first_norm=f1.sup_norm_lower(grid),
        second_norm=g1.sup_norm_lower(grid),
        grid=grid,
        trace=trace,
    )


def to_star(order: OrderSpec, f: TrigPoly, g: TrigPoly) -> tuple[TrigPoly, TrigPoly]:
    """Star witnesses f₁ = f + i·g and g₁ = f − i·g + i·ĝ(𝟏) of φ = f + g̃."""
    _check_dimension(order, f, g)
    constant = TrigPoly.constant(g.n, 1j * mean_value(g))
    f1 = f + g.scale(1j)
    g1 = f - g.scale(1j) + constant
    return f1, g1


def from_star(order: OrderSpec, f1: TrigPoly, g1: TrigPoly) -> tuple[TrigPoly, TrigPoly]:
    """Def2 witnesses of φ = P₋f₁ + P₊g₁.

    f = ½(f₁ + g₁ − f̂₁(𝟏) + ĝ₁(𝟏)) and g = ½(i·g₁ − i·f₁), with
    ‖f‖∞ + ‖g‖∞ ≤ (3/2)(‖f₁‖∞ + ‖g₁‖∞).
    """
    _check_dimension(order, f1, g1)
    constant = TrigPoly.constant(f1.n, mean_value(g1) - mean_value(f1))
    f = (f1 + g1 + constant).scale(0.5)
    g = (g1.scale(1j) - f1.scale(1j)).scale(0.5)
    return f, g


def _basis(grid: GridSpec, indices: list[CharacterIndex]) -> np.ndarray:
    """Values of the characters on the grid, one column per index."""
    if not indices:
        return np.zeros((grid.size, 0), dtype=np.complex128)
    m = grid.points_per_dim
    roots = np.exp(2j * np.pi * np.arange(m) / m)
    exponents = np.mod(grid.index_points() @ np.array(indices, dtype=np.int64).T, m)
    return roots[exponents]


def _free_indices(
    order: OrderSpec, phi: TrigPoly, free_box: Box | None
) -> tuple[list[CharacterIndex], list[CharacterIndex]]:
    if free_box is None:
        free_box = Box.covering(phi.support(), phi.n, inflate=FREE_BOX_INFLATION)
    if free_box.n != order.n:
        raise InvalidFreeBoxError(
            f"Free box has dimension {free_box.n}, the order has dimension {order.n}"
        )
    if free_box.size > MAX_FREE_COEFFICIENTS:
        raise InvalidFreeBoxError(
            f"Free box holds {free_box.size} points, limit is {MAX_FREE_COEFFICIENTS}"
        )
    return (
        order.enumerate_cone(free_box, Cone.POSITIVE),
        order.enumerate_cone(free_box, Cone.NEGATIVE),
    )


def _subgradient_step(
    values: np.ndarray, basis: np.ndarray, coefficients: np.ndarray, step: float
) -> bool:
    """Move coefficients against the normalized subgradient of max |values|.

    Returns False when the part has no free coefficients to move.
    """
    if basis.shape[1] == 0:
        return False
    peak = int(np.argmax(np.abs(values)))
    value = values[peak]
    gradient = (value / abs(value)) * basis[peak].conj()
    coefficients -= step * gradient / np.linalg.norm(gradient)
    return True


def _optimize(
    order: OrderSpec,
    phi: TrigPoly,
    grid: GridSpec,
    free_box: Box | None,
    solver: SolverConfig,
    *,
    analytic: bool,
) -> BmoDecomposition:
    """Minimize max(‖f₁‖, ‖g₁‖) on the grid over the free coefficients.

    f₁ is pinned to P₋φ on X₋ and free on X₊ ∩ free_box; g₁ is pinned to P₊φ on X₊
    and free on X₋ ∩ free_box. With 'analytic' the f₁ part is dropped and only
    ‖g₁‖ is minimized. The returned decomposition is never worse than the start.
    """
    _check_dimension(order, phi)
    if grid.n != order.n:
        raise DimensionMismatchError(expected=order.n, actual=grid.n)
    fixed_f1 = TrigPoly.zero(phi.n) if analytic else p_minus(order, phi)
    fixed_g1 = p_plus(order, phi)
    start = star_decomposition(order, fixed_f1, fixed_g1, grid)
    initial = start.bound if not analytic else start.second_norm
    if solver.iters == 0 or initial <= solver.tol:
        trace = SolverTrace(0, initial, initial, 0)
        return star_decomposition(order, fixed_f1, fixed_g1, grid, trace)

    free_f1, free_g1 = _free_indices(order, phi, free_box)
    if analytic:
        free_f1 = []
    basis_f1 = _basis(grid, free_f1)
    basis_g1 = _basis(grid, free_g1)
    base_f1 = fixed_f1.evaluate_grid(grid)
    base_g1 = fixed_g1.evaluate_grid(grid)
    a = np.zeros(len(free_f1), dtype=np.complex128)
    b = np.zeros(len(free_g1), dtype=np.complex128)
    best_value, best_a, best_b, best_iteration = initial, a.copy(), b.copy(), 0

    for iteration in range(1, solver.iters + 1):
        f1_values = base_f1 + basis_f1 @ a
        g1_values = base_g1 + basis_g1 @ b
        f1_peak = float(np.max(np.abs(f1_values)))
        g1_peak = float(np.max(np.abs(g1_values)))
        value = g1_peak if analytic else max(f1_peak, g1_peak)
        if not np.isfinite(value):
            raise SolverError(f"Objective is not finite at iteration {iteration}")
        if value < best_value:
            best_value, best_a, best_b = value, a.copy(), b.copy()
            best_iteration = iteration - 1
        if value <= solver.tol:
            break

        step = solver.step_scale * initial / np.sqrt(iteration)
        if analytic or g1_peak >= f1_peak:
            moved = _subgradient_step(g1_values, basis_g1, b, step)
        else:
            moved = _subgradient_step(f1_values, basis_f1, a, step)
        if not moved:
            # the active part has nothing free, so the maximum cannot decrease
            break

    logger.debug(
        f"Star solver: objective {initial!r} -> {best_value!r} "
        f"(best at iteration {best_iteration} of {iteration})"
    )
    f1 = fixed_f1 + TrigPoly(phi.n, dict(zip(free_f1, best_a, strict=True)))
    g1 = fixed_g1 + TrigPoly(phi.n, dict(zip(free_g1, best_b, strict=True)))
    trace = SolverTrace(iteration, initial, best_value, best_iteration)
    result = star_decomposition(order, f1, g1, grid, trace)
    measure = (lambda d: d.second_norm) if analytic else (lambda d: d.bound)
    if measure(result) > measure(start):
        return star_decomposition(order, fixed_f1, fixed_g1, grid, trace)
    return result


def star_upper_optimize(
    order: OrderSpec,
    phi: TrigPoly,
    grid: GridSpec,
    free_box: Box | None = None,
    solver: SolverConfig | None = None,
) -> BmoDecomposition:
    """Upper bound on the star norm by subgradient descent over free coefficients.

    Raises:
        InvalidFreeBoxError: If the free box does not fit the order.
        SolverError: If the objective stops being finite.
    """
    return _optimize(order, phi, grid, free_box, solver or SolverConfig(), analytic=False)


def star_bmoa_upper_optimize(
    order: OrderSpec,
    phi: TrigPoly,
    grid: GridSpec,
    free_box: Box | None = None,
    solver: SolverConfig | None = None,
) -> BmoDecomposition:
    """Upper bound on inf{‖g₁‖∞ : φ = P₊g₁} for analytic φ.

    Raises:
        NotAnalyticError: If φ has coefficients on X₋.
    """
    if not p_minus(order, phi).is_zero():
        raise NotAnalyticError
    return _optimize(order, phi, grid, free_box, solver or SolverConfig(), analytic=True)


def hankel_seminorm(
    order: OrderSpec,
    phi: TrigPoly,
    boxes: TruncationBoxes | None = None,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> SeminormResult:
    """Truncated ‖H_φ̄‖ + ‖H_φ‖, each a certified lower bound.

    Raises:
        NoMinimalPositiveError: If the order has no least positive element.
    """
    order.minimal_positive()
    _check_dimension(order, phi)
    if boxes is None:
        boxes = TruncationBoxes.for_symbol(order, phi)
    hankel_norm = operator_norm(
        hankel_matrix(order, phi, boxes.neg_rows, boxes.pos_cols),
        tol=tol,
        max_iters=max_iters,
    ).value
    conj_hankel_norm = operator_norm(
        hankel_matrix(order, phi.conj(), boxes.neg_rows, boxes.pos_cols),
        tol=tol,
        max_iters=max_iters,
    ).value
    analytic = p_minus(order, phi).is_zero()
    return SeminormResult(
        hankel_norm=hankel_norm,
        conj_hankel_norm=conj_hankel_norm,
        analytic_norm=conj_hankel_norm if analytic else None,
        boxes=boxes,
    )


def bmoa_check(
    order: OrderSpec,
    phi: TrigPoly,
    boxes: TruncationBoxes | None = None,
    tol: float = DEFAULT_TOL,
) -> BmoaReport:
    """Analytic-type flag with truncated ‖H_φ̄‖ and ‖H_φ̄‖ + ‖H_φ‖.

    Boundedness is automatic for polynomials, so membership reduces to P₋φ = 0.
    """
    _check_dimension(order, phi)
    if boxes is None:
        boxes = TruncationBoxes.for_symbol(order, phi)
    conj_hankel_norm = operator_norm(
        hankel_matrix(order, phi.conj(), boxes.neg_rows, boxes.pos_cols), tol=tol
    ).value
    hankel_norm = operator_norm(
        hankel_matrix(order, phi, boxes.neg_rows, boxes.pos_cols), tol=tol
    ).value
    return BmoaReport(
        analytic=p_minus(order, phi).is_zero(),
        conj_hankel_norm=conj_hankel_norm,
        seminorm=conj_hankel_norm + hankel_norm,
    )


def conj_closure_witness(
    order: OrderSpec, decomposition: BmoDecomposition
) -> BmoDecomposition:
    """Star decomposition of conj(φ) from one of φ = P₋f + P₊g.

    The witnesses are f₁ = ḡ and g₁ = f̄ − conj f̂(𝟏) + conj ĝ(𝟏).
    """
    if decomposition.style != DecompositionStyle.STAR:
        raise ValueError("Conjugate closure needs a star decomposition")
    f, g = decomposition.first, decomposition.second
    shift = mean_value(g).conjugate() - mean_value(f).conjugate()
    f1 = g.conj()
    g1 = f.conj() + TrigPoly.constant(f.n, shift)
    return star_decomposition(order, f1, g1, decomposition.grid)


def conj_star_identity(order: OrderSpec, f: TrigPoly, g: TrigPoly) -> TrigPoly:
    """P₊f̄ + P₋ḡ + (conj ĝ(𝟏) − conj f̂(𝟏))·𝟏, which equals conj(P₋f + P₊g)."""
    _check_dimension(order, f, g)
    constant = TrigPoly.constant(
        f.n, mean_value(g).conjugate() - mean_value(f).conjugate()
    )
    return p_plus(order, f.conj()) + p_minus(order, g.conj()) + constant


def analytic_part_witness(
    order: OrderSpec, decomposition: BmoDecomposition
) -> BmoDecomposition:
    """Star decomposition of P₊φ with the f₁ part absent, so P₊φ = P₊g₁."""
    if decomposition.style == DecompositionStyle.DEF2:
        _, g1 = to_star(order, decomposition.first, decomposition.second)
    else:
        g1 = decomposition.second
    return star_decomposition(
        order, TrigPoly.zero(decomposition.phi.n), g1, decomposition.grid
    )


def split_analytic_coanalytic(
    order: OrderSpec, phi: TrigPoly
) -> tuple[TrigPoly, TrigPoly]:
    """Return analytic (f₁, f₂) with φ = f₁ + conj(f₂).

    Then H_φ = H_{conj f₂} and H_φ̄ = H_{conj f₁}.
    """
    _check_dimension(order, phi)
    return p_plus(order, phi), p_minus(order, phi).conj()


def bounded_symbol_witness(order: OrderSpec, f: TrigPoly, g: TrigPoly) -> TrigPoly:
    """Bounded symbol ψ₁ = f + i·g + i·ĝ(𝟏) with P₋ψ₁ = P₋(f + g̃), so H_φ = H_ψ₁."""
    _check_dimension(order, f, g)
    return f + g.scale(1j) + TrigPoly.constant(g.n, 1j * mean_value(g))


def _best_def2(order: OrderSpec, phi: TrigPoly, grid: GridSpec) -> BmoDecomposition:
    trivial = def2_upper(order, phi, TrigPoly.zero(phi.n), grid)
    f, g = from_star(order, p_minus(order, phi), p_plus(order, phi))
    converted = def2_upper(order, f, g, grid)
    return converted if converted.bound < trivial.bound else trivial


def sandwich_verify(
    order: OrderSpec,
    phi: TrigPoly,
    grid: GridSpec,
    boxes: TruncationBoxes | None = None,
    solver: SolverConfig | None = None,
    slack: float = DEFAULT_SLACK,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> BmoReport:
    """Check the sound directions of the constant chain relating the three norms.

    Upper bounds come from explicit decompositions: the better of φ = φ + 0̃ and the
    conversion of P₋φ + P₊φ for the def2 norm, and the better of its star
    conversion and the subgradient optimizer (skipped when 'solver' is None) for the
    star norm. The lower bound is the truncated Hankel seminorm.

    Raises:
        NoMinimalPositiveError: If the order has no least positive element.
    """
    if slack < 0:
        raise ValueError(f"Slack must be non-negative, got {slack}")
    seminorm = hankel_seminorm(order, phi, boxes, tol, max_iters)
    def2 = _best_def2(order, phi, grid)
    star_constructive = star_decomposition(
        order, *to_star(order, def2.first, def2.second), grid
    )
    star = star_constructive
    if solver is not None:
        optimized = star_upper_optimize(order, phi, grid, solver=solver)
        if optimized.bound < star.bound:
            star = optimized
    f, g = from_star(order, star.first, star.second)
    inflated = def2_upper(order, f, g, grid)

    verdicts = [
        InequalityVerdict.check("chain_star", seminorm.value, 2 * star.bound, slack),
        InequalityVerdict.check("chain_def2", seminorm.value, 4 * def2.bound, slack),
        InequalityVerdict.check(
            "star_vs_def2", star_constructive.bound, 2 * def2.bound, slack
        ),
        InequalityVerdict.check("star_sum", seminorm.value, star.norm_sum, slack),
        InequalityVerdict.check(
            "from_star_inflation", inflated.bound, 1.5 * star.norm_sum, slack
        ),
    ]

    bmoa = BmoaReport(
        analytic=seminorm.analytic_norm is not None,
        conj_hankel_norm=seminorm.conj_hankel_norm,
        seminorm=seminorm.value,
    )
    analytic_star = None
    if seminorm.analytic_norm is not None:
        if solver is not None:
            analytic_star = star_bmoa_upper_optimize(order, phi, grid, solver=solver)
        else:
            analytic_star = star_decomposition(order, TrigPoly.zero(phi.n), phi, grid)
        verdicts.append(
            InequalityVerdict.check(
                "analytic_star",
                seminorm.analytic_norm,
                analytic_star.second_norm,
                slack,
            )
        )

    report = BmoReport(
        phi=phi,
        order=order,
        seminorm=seminorm,
        def2=def2,
        star=star,
        star_constructive=star_constructive,
        bmoa=bmoa,
        analytic_star=analytic_star,
        verdicts=verdicts,
        slack=slack,
    )
    if not report.passed:
        logger.warning(f"Sandwich failures for {phi!r}: {report.failures()}")
    return report
