import dataclasses

import numpy as np
import pytest

from ordered_harmonics.bmo import (
    BmoReport,
    DecompositionStyle,
    InequalityVerdict,
    SolverConfig,
    analytic_part_witness,
    bmoa_check,
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
from ordered_harmonics.exceptions import (
    DimensionMismatchError,
    InequalityViolationError,
    InvalidFreeBoxError,
    NoMinimalPositiveError,
    NotAnalyticError,
)
from ordered_harmonics.hankel import TruncationBoxes, hankel_matrix
from ordered_harmonics.ordered_group import Box
from ordered_harmonics.transforms import p_minus, p_plus
from ordered_harmonics.trigpoly import TrigPoly

SMALL_SOLVER = SolverConfig(iters=150)


@pytest.fixture
def sandwich_poly():
    return TrigPoly(1, {(-1,): 1, (1,): 1})


def test_def2_upper_of_conjugate_cos(lex1, cos_poly, sin_poly, grid1):
    decomposition = def2_upper(lex1, TrigPoly.zero(1), cos_poly, grid1)
    assert decomposition.style == DecompositionStyle.DEF2
    assert decomposition.bound == pytest.approx(1.0)
    assert decomposition.phi.allclose(sin_poly)
    assert decomposition.reconstruct(lex1).allclose(sin_poly)


def test_to_star_witnesses(lex1, cos_poly):
    f1, g1 = to_star(lex1, TrigPoly.zero(1), cos_poly)
    assert f1.coefficient((1,)) == 0.5j
    assert g1.coefficient((1,)) == -0.5j


def test_star_conversions_reconstruct(lex2, corpus2, grid2):
    for f, g in zip(corpus2, reversed(corpus2), strict=True):
        def2 = def2_upper(lex2, f, g, grid2)
        star = star_decomposition(lex2, *to_star(lex2, f, g), grid2)
        assert star.phi.allclose(def2.phi)
        back = def2_upper(lex2, *from_star(lex2, star.first, star.second), grid2)
        assert back.phi.allclose(star.phi)


def test_star_conversion_inflation_factors(lex1, corpus1, grid1):
    for f, g in zip(corpus1, reversed(corpus1), strict=True):
        def2 = def2_upper(lex1, f, g, grid1)
        star = star_decomposition(lex1, *to_star(lex1, f, g), grid1)
        assert star.bound <= 2 * def2.bound * (1 + 1e-12)
        back = def2_upper(lex1, *from_star(lex1, star.first, star.second), grid1)
        assert back.bound <= 1.5 * star.norm_sum * (1 + 1e-12)


def test_def2_upper_dimension_mismatch_raises_error(lex1, mixed_poly2, grid1):
    with pytest.raises(DimensionMismatchError):
        def2_upper(lex1, mixed_poly2, mixed_poly2, grid1)


def test_hankel_seminorm_chi_1(lex1, chi_1):
    seminorm = hankel_seminorm(lex1, chi_1)
    assert seminorm.hankel_norm == 0.0
    assert seminorm.conj_hankel_norm == pytest.approx(1.0)
    assert seminorm.value == pytest.approx(1.0)
    assert seminorm.analytic_norm == pytest.approx(1.0)


def test_hankel_seminorm_sin(lex1, sin_poly):
    seminorm = hankel_seminorm(lex1, sin_poly)
    assert seminorm.hankel_norm == pytest.approx(0.5)
    assert seminorm.conj_hankel_norm == pytest.approx(0.5)
    assert seminorm.analytic_norm is None


def test_hankel_seminorm_ignores_constants(lex2, mixed_poly2):
    boxes = TruncationBoxes.for_box(lex2, Box.symmetric(2, 3))
    shifted = mixed_poly2 + TrigPoly.constant(2, 4 - 2j)
    assert hankel_seminorm(lex2, shifted, boxes).value == pytest.approx(
        hankel_seminorm(lex2, mixed_poly2, boxes).value, rel=1e-12
    )


def test_hankel_seminorm_vanishes_only_on_constants(lex2, mixed_poly2):
    assert hankel_seminorm(lex2, TrigPoly.constant(2, 3.0)).value == 0.0
    assert hankel_seminorm(lex2, mixed_poly2).value > 0


def test_hankel_seminorm_functional_raises_error(functional2, mixed_poly2):
    with pytest.raises(NoMinimalPositiveError):
        hankel_seminorm(functional2, mixed_poly2)


def test_bmoa_check_is_not_gated(functional2, mixed_poly2):
    analytic = p_plus(functional2, mixed_poly2)
    report = bmoa_check(functional2, analytic)
    assert report.analytic
    assert report.seminorm >= report.conj_hankel_norm
    assert not bmoa_check(functional2, mixed_poly2).analytic


def test_star_upper_optimize_never_worse_than_start(lex1, sandwich_poly, grid1):
    start = star_decomposition(
        lex1, p_minus(lex1, sandwich_poly), p_plus(lex1, sandwich_poly), grid1
    )
    optimized = star_upper_optimize(lex1, sandwich_poly, grid1, solver=SMALL_SOLVER)
    assert optimized.bound <= start.bound
    assert optimized.phi.allclose(sandwich_poly)
    assert optimized.trace is not None
    assert optimized.trace.final_objective <= optimized.trace.initial_objective


def test_star_upper_optimize_improves_on_start(lex1, grid1):
    phi = TrigPoly(1, {(0,): 1, (1,): 1})
    solver = SolverConfig(iters=300, step_scale=0.05)
    optimized = star_upper_optimize(lex1, phi, grid1, solver=solver)
    assert optimized.bound < 2.0  # noqa: PLR2004
    assert optimized.phi.allclose(phi, rel=1e-9)


def test_star_upper_optimize_zero_iterations(lex1, sandwich_poly, grid1):
    optimized = star_upper_optimize(
        lex1, sandwich_poly, grid1, solver=SolverConfig(iters=0)
    )
    assert optimized.trace.iterations == 0
    assert optimized.bound == pytest.approx(1.0)


def test_star_upper_optimize_free_box_dimension_raises_error(
    lex1, sandwich_poly, grid1
):
    with pytest.raises(InvalidFreeBoxError, match="Free box has dimension 2"):
        star_upper_optimize(lex1, sandwich_poly, grid1, free_box=Box.symmetric(2, 1))


def test_star_upper_optimize_free_box_too_large_raises_error(
    lex1, sandwich_poly, grid1
):
    with pytest.raises(InvalidFreeBoxError, match="limit is 4096"):
        star_upper_optimize(
            lex1, sandwich_poly, grid1, free_box=Box.symmetric(1, 3000)
        )


def test_solver_config_invalid_raises_error():
    with pytest.raises(ValueError, match="must be non-negative"):
        SolverConfig(iters=-1)
    with pytest.raises(ValueError, match="must be positive"):
        SolverConfig(step_scale=0)


def test_star_bmoa_upper_optimize(lex1, chi_1, grid1):
    decomposition = star_bmoa_upper_optimize(lex1, chi_1, grid1, solver=SMALL_SOLVER)
    assert decomposition.first.is_zero()
    assert p_plus(lex1, decomposition.second).allclose(chi_1)
    assert decomposition.second_norm <= 1.0 + 1e-12


def test_star_bmoa_upper_optimize_not_analytic_raises_error(
    lex1, sandwich_poly, grid1
):
    with pytest.raises(NotAnalyticError):
        star_bmoa_upper_optimize(lex1, sandwich_poly, grid1)


def test_conj_closure_witness(lex2, mixed_poly2, grid2):
    f = TrigPoly(2, {(0, 0): 2, (0, -1): 1j, (1, 1): 3})
    g = TrigPoly(2, {(0, 0): -1, (-1, 2): 0.5, (2, 0): 1 - 1j})
    decomposition = star_decomposition(lex2, f, g, grid2)
    witness = conj_closure_witness(lex2, decomposition)
    assert witness.phi.allclose(decomposition.phi.conj())
    assert witness.first_norm == pytest.approx(decomposition.second_norm)
    assert conj_star_identity(lex2, f, g).allclose(decomposition.phi.conj())


def test_conj_closure_witness_needs_star(lex1, cos_poly, grid1):
    decomposition = def2_upper(lex1, cos_poly, cos_poly, grid1)
    with pytest.raises(ValueError, match="needs a star decomposition"):
        conj_closure_witness(lex1, decomposition)


def test_analytic_part_witness(lex2, mixed_poly2, grid2):
    decomposition = star_upper_optimize(lex2, mixed_poly2, grid2, solver=SMALL_SOLVER)
    witness = analytic_part_witness(lex2, decomposition)
    assert witness.first.is_zero()
    assert witness.phi.allclose(p_plus(lex2, mixed_poly2), rel=1e-9)
    assert witness.bound <= decomposition.bound


def test_split_analytic_coanalytic(lex2, mixed_poly2):
    f1, f2 = split_analytic_coanalytic(lex2, mixed_poly2)
    assert p_minus(lex2, f1).is_zero()
    assert p_minus(lex2, f2).is_zero()
    assert (f1 + f2.conj()).allclose(mixed_poly2)


def test_bounded_symbol_witness_has_same_hankel_operator(lex1, corpus1, grid1):
    boxes = TruncationBoxes.for_box(lex1, Box.symmetric(1, 4))
    for f, g in zip(corpus1, reversed(corpus1), strict=True):
        psi = bounded_symbol_witness(lex1, f, g)
        phi = def2_upper(lex1, f, g, grid1).phi
        np.testing.assert_allclose(
            hankel_matrix(lex1, psi, boxes.neg_rows, boxes.pos_cols).entries,
            hankel_matrix(lex1, phi, boxes.neg_rows, boxes.pos_cols).entries,
            atol=1e-12,
        )


def test_inequality_verdict():
    assert InequalityVerdict.check("within slack", 1.01, 1.0, 0.02).passed
    assert not InequalityVerdict.check("violated", 1.1, 1.0, 0.02).passed
    assert InequalityVerdict.check("zero", 0.0, 0.0, 0.0).passed


def test_sandwich_verify_two_cosines(lex1, sandwich_poly, grid1):
    report = sandwich_verify(lex1, sandwich_poly, grid1, solver=SMALL_SOLVER)
    assert isinstance(report, BmoReport)
    assert report.passed
    assert report.failures() == []
    assert report.hankel_seminorm_lower == pytest.approx(2.0)
    assert report.star_upper <= 1.0 + 1e-12
    assert report.def2_upper == pytest.approx(2.0)
    assert not report.bmoa.analytic
    assert report.analytic_star is None
    assert [verdict.name for verdict in report.verdicts] == [
        "chain_star",
        "chain_def2",
        "star_vs_def2",
        "star_sum",
        "from_star_inflation",
    ]
    report.raise_for_failures()


def test_sandwich_verify_zero_symbol(lex1, grid1):
    report = sandwich_verify(lex1, TrigPoly.zero(1), grid1)
    assert report.passed
    assert report.hankel_seminorm_lower == 0.0
    assert report.star_upper == 0.0
    assert report.def2_upper == 0.0


def test_sandwich_verify_analytic_symbol(lex1, chi_1, grid1):
    report = sandwich_verify(lex1, chi_1, grid1)
    assert report.bmoa.analytic
    assert report.analytic_star is not None
    assert report.verdicts[-1].name == "analytic_star"
    assert report.passed


def test_sandwich_verify_corpus(lex2, corpus2, grid2):
    for phi in corpus2:
        assert sandwich_verify(lex2, phi, grid2).passed


def test_sandwich_verify_functional_raises_error(functional2, mixed_poly2, grid2):
    with pytest.raises(NoMinimalPositiveError):
        sandwich_verify(functional2, mixed_poly2, grid2)


def test_sandwich_verify_negative_slack_raises_error(lex1, chi_1, grid1):
    with pytest.raises(ValueError, match="Slack must be non-negative"):
        sandwich_verify(lex1, chi_1, grid1, slack=-0.1)


def test_raise_for_failures(lex1, sandwich_poly, grid1):
    report = sandwich_verify(lex1, sandwich_poly, grid1)
    failing = dataclasses.replace(
        report, verdicts=[InequalityVerdict.check("chain_star", 3.0, 1.0, 0.0)]
    )
    assert failing.failures() == ["chain_star"]
    with pytest.raises(InequalityViolationError, match="chain_star"):
        failing.raise_for_failures()


def test_bmo_report_to_dict(lex1, sandwich_poly, grid1):
    data = sandwich_verify(lex1, sandwich_poly, grid1).to_dict()
    assert data["order"] == {"kind": "lex", "n": 1}
    assert data["passed"]
    witnesses = {"def2", "star", "star_constructive", "analytic_star"}
    assert set(data["witnesses"]) == witnesses
    assert data["witnesses"]["analytic_star"] is None
