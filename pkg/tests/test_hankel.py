import numpy as np
import pytest

from ordered_harmonics.exceptions import (
    ConeViolationError,
    InvalidRunConfigError,
    NoConvergenceError,
    NoMinimalPositiveError,
    NotAnalyticError,
)
from ordered_harmonics.hankel import (
    HankelForm,
    TruncationBoxes,
    adjoint_hankel_matrix,
    apply_hankel,
    apply_hankel_vector,
    form_norm,
    gamma_kernel,
    gamma_matrix,
    hankel_matrix,
    nehari_kernel,
    operator_norm,
    shift_compress,
    unitary_transfer,
)
from ordered_harmonics.corpus import symbol_corpus
from ordered_harmonics.ordered_group import Box, OrderSpec
from ordered_harmonics.trigpoly import TrigPoly

ROWS = [(-1,), (-2,)]
COLS = [(0,), (1,)]


def test_hankel_matrix_chi_minus_1(lex1, chi_minus_1):
    truncation = hankel_matrix(lex1, chi_minus_1, ROWS, COLS)
    assert truncation.form == HankelForm.OPERATOR
    assert truncation.shape == (2, 2)
    np.testing.assert_array_equal(truncation.entries, [[1, 0], [0, 0]])


def test_hankel_matrix_chi_minus_2(lex1):
    truncation = hankel_matrix(lex1, TrigPoly.character((-2,)), ROWS, COLS)
    np.testing.assert_array_equal(truncation.entries, [[0, 1], [1, 0]])


def test_hankel_matrix_of_constant_is_zero(lex2):
    boxes = TruncationBoxes.for_box(lex2, Box.symmetric(2, 2))
    truncation = hankel_matrix(
        lex2, TrigPoly.constant(2, 1.0), boxes.neg_rows, boxes.pos_cols
    )
    assert not truncation.entries.any()


def test_hankel_matrix_positive_row_raises_error(lex1, chi_minus_1):
    with pytest.raises(ConeViolationError, match="not in the negative cone"):
        hankel_matrix(lex1, chi_minus_1, [(0,)], COLS)


def test_hankel_matrix_to_dict(lex1, chi_minus_1):
    data = hankel_matrix(lex1, chi_minus_1, ROWS, COLS, provenance="test").to_dict()
    assert data["form"] == "operator"
    assert data["provenance"] == "test"
    assert data["rows"] == [[-1], [-2]]
    assert data["re"] == [[1.0, 0.0], [0.0, 0.0]]


def test_apply_hankel(lex1, chi_minus_1, chi_1):
    assert apply_hankel(lex1, chi_minus_1, TrigPoly.constant(1, 1)) == chi_minus_1
    assert apply_hankel(lex1, chi_minus_1, chi_1).is_zero()


def test_apply_hankel_not_analytic_raises_error(lex1, chi_minus_1):
    with pytest.raises(NotAnalyticError):
        apply_hankel(lex1, chi_minus_1, chi_minus_1)


def test_matrix_action_matches_apply_hankel(lex2, mixed_poly2):
    boxes = TruncationBoxes.for_box(lex2, Box.symmetric(2, 6))
    truncation = hankel_matrix(lex2, mixed_poly2, boxes.neg_rows, boxes.pos_cols)
    f = TrigPoly(2, {(0, 0): 1, (0, 2): -1j, (1, -1): 0.5})
    assert apply_hankel_vector(truncation, f).allclose(apply_hankel(lex2, mixed_poly2, f))


def test_adjoint_identity(lex2, mixed_poly2):
    boxes = TruncationBoxes.for_box(lex2, Box.symmetric(2, 2))
    truncation = hankel_matrix(lex2, mixed_poly2, boxes.neg_rows, boxes.pos_cols)
    adjoint = adjoint_hankel_matrix(lex2, mixed_poly2, boxes.pos_cols, boxes.neg_rows)
    np.testing.assert_allclose(adjoint, truncation.entries.conj().T, atol=1e-12)


def test_gamma_kernel(lex1, lex2, chi_minus_1):
    assert gamma_kernel(lex1, chi_minus_1) == {(0,): 1}
    assert gamma_kernel(lex2, TrigPoly.character((0, -1))) == {(0, 0): 1}


def test_gamma_kernel_ignores_positive_coefficients(lex1, chi_1):
    assert gamma_kernel(lex1, chi_1) == {}


def test_gamma_kernel_functional_raises_error(functional2, mixed_poly2):
    with pytest.raises(NoMinimalPositiveError):
        gamma_kernel(functional2, mixed_poly2)


def test_gamma_matrix_is_antidiagonal_hankel(lex1):
    gamma = gamma_matrix(lex1, {(1,): 1}, [(0,), (1,)])
    assert gamma.form == HankelForm.GAMMA
    np.testing.assert_array_equal(gamma.entries, [[0, 1], [1, 0]])


def test_gamma_matrix_is_symmetric(lex2, mixed_poly2):
    gamma = gamma_matrix(lex2, gamma_kernel(lex2, mixed_poly2), Box.symmetric(2, 2))
    np.testing.assert_array_equal(gamma.entries, gamma.entries.T)


def test_unitary_transfer_gives_operator_form(lex2, mixed_poly2):
    gamma = gamma_matrix(lex2, gamma_kernel(lex2, mixed_poly2), Box.symmetric(2, 2))
    transferred = unitary_transfer(lex2, gamma)
    assert transferred.form == HankelForm.OPERATOR
    assert transferred.rows == tuple(lex2.j_map(chi) for chi in gamma.rows)
    operator = hankel_matrix(lex2, mixed_poly2, transferred.rows, transferred.cols)
    np.testing.assert_array_equal(transferred.entries, operator.entries)
    assert unitary_transfer(lex2, transferred).rows == gamma.rows


def test_unitary_transfer_preserves_norm(lex1, corpus1):
    for phi in corpus1:
        gamma = gamma_matrix(lex1, gamma_kernel(lex1, phi), Box.symmetric(1, 4))
        transferred = unitary_transfer(lex1, gamma)
        assert operator_norm(gamma).value == pytest.approx(
            operator_norm(transferred).value, rel=1e-9
        )


def test_unitary_transfer_preserves_norm_in_three_variables(lex3):
    box = Box.symmetric(3, 1)
    for phi in symbol_corpus(seed=4, n=3, count=5, max_terms=8, degree=1):
        gamma = gamma_matrix(lex3, gamma_kernel(lex3, phi), box)
        transferred = unitary_transfer(lex3, gamma)
        assert transferred.rows == tuple(lex3.j_map(chi) for chi in gamma.rows)
        operator = hankel_matrix(lex3, phi, transferred.rows, transferred.cols)
        np.testing.assert_array_equal(transferred.entries, operator.entries)
        assert operator_norm(gamma).value == pytest.approx(
            operator_norm(transferred).value, rel=1e-9
        )


def test_operator_norm_golden_ratio(lex1):
    truncation = hankel_matrix(lex1, TrigPoly(1, {(-1,): 1, (-2,): 1}), ROWS, COLS)
    assert operator_norm(truncation).value == pytest.approx((1 + np.sqrt(5)) / 2)


def test_operator_norm_matches_svd(lex1, corpus1):
    for phi in corpus1:
        boxes = TruncationBoxes.for_symbol(lex1, phi)
        truncation = hankel_matrix(lex1, phi, boxes.neg_rows, boxes.pos_cols)
        expected = np.linalg.svd(truncation.entries, compute_uv=False)[0]
        assert operator_norm(truncation).value == pytest.approx(expected, rel=1e-9)


def test_operator_norm_large_matrix_matches_svd():
    rng = np.random.default_rng(3)
    matrix = rng.standard_normal((40, 30)) + 1j * rng.standard_normal((40, 30))
    expected = np.linalg.svd(matrix, compute_uv=False)[0]
    result = operator_norm(matrix)
    assert result.value == pytest.approx(expected, rel=1e-8)
    assert result.value <= expected * (1 + 1e-12)
    np.testing.assert_allclose(matrix @ result.right, result.value * result.left)


def test_operator_norm_zero_matrix():
    result = operator_norm(np.zeros((3, 2)))
    assert result.value == 0.0
    assert result.right.shape == (2,)
    assert operator_norm(np.zeros((0, 0))).value == 0.0


def test_operator_norm_no_convergence_raises_error():
    matrix = np.arange(1, 301, dtype=float).reshape(20, 15)
    with pytest.raises(NoConvergenceError, match="did not converge after 1"):
        operator_norm(matrix, max_iters=1, block_size=1)


def test_operator_norm_invalid_tolerance_raises_error():
    with pytest.raises(ValueError, match="Tolerance must be positive"):
        operator_norm(np.eye(2), tol=0)


def test_truncation_boxes_for_symbol(lex1):
    boxes = TruncationBoxes.for_symbol(lex1, TrigPoly(1, {(-2,): 1, (1,): 1}))
    assert boxes.neg_rows == ((-2,), (-1,))
    assert boxes.pos_cols == ((0,), (1,), (2,))


def test_truncation_boxes_nested(lex1, chi_minus_1):
    boxes = TruncationBoxes.for_symbol(lex1, chi_minus_1).nested(lex1, 3)
    assert boxes.neg_rows == ((-3,), (-2,), (-1,))
    assert boxes.pos_cols == ((0,), (1,), (2,), (3,))


def test_truncation_boxes_too_large_raises_error(lex1):
    with pytest.raises(InvalidRunConfigError, match="exceeds the matrix dimension"):
        TruncationBoxes.for_box(lex1, Box(lows=(0,), highs=(5000,)))


@pytest.mark.parametrize(
    "box",
    [Box.symmetric(1, 5000), Box.symmetric(2, 2000), Box.symmetric(1, 10**20)],
)
def test_truncation_boxes_oversized_box_rejected_before_enumeration(
    monkeypatch, lex1, box
):
    def fail_points(_box):
        raise AssertionError

    monkeypatch.setattr(Box, "points", fail_points)
    order = lex1 if box.n == 1 else OrderSpec.lex(box.n)
    with pytest.raises(InvalidRunConfigError, match="over the matrix dimension limit"):
        TruncationBoxes.for_box(order, box)


def test_truncation_boxes_for_symbol_far_index_raises_error(lex2):
    phi = TrigPoly(2, {(0, -2000): 1.0})
    with pytest.raises(InvalidRunConfigError, match="at least 8004000 indices"):
        TruncationBoxes.for_symbol(lex2, phi)


def test_truncation_monotonicity(lex2, corpus2):
    for phi in corpus2:
        norms = []
        for radius in (1, 2, 3):
            boxes = TruncationBoxes.for_box(lex2, Box.symmetric(2, radius))
            truncation = hankel_matrix(lex2, phi, boxes.neg_rows, boxes.pos_cols)
            norms.append(operator_norm(truncation).value)
        assert norms[0] <= norms[1] * (1 + 1e-6)
        assert norms[1] <= norms[2] * (1 + 1e-6)


def test_shift_compress_intertwines(lex1, corpus1):
    rows, cols = [(-3,), (-2,), (-1,)], [(0,), (1,), (2,)]
    for phi in corpus1:
        compression = shift_compress(lex1, (1,), phi, rows, cols)
        assert compression.interior.all()
        assert compression.interior_error() <= 1e-12


def test_shift_compress_marks_leaking_rows(lex1, corpus1):
    rows, cols = [(-3,), (-2,), (-1,)], [(0,), (1,), (2,)]
    compression = shift_compress(lex1, (1,), corpus1[0], rows, cols, source_rows=rows)
    assert compression.interior.tolist() == [False, True, True]
    assert compression.interior_error() <= 1e-12


def test_shift_compress_negative_shift_raises_error(lex1, chi_1):
    with pytest.raises(ConeViolationError, match="not in the positive cone"):
        shift_compress(lex1, (-1,), chi_1, ROWS, COLS)


def test_nehari_kernel(lex1):
    phi = TrigPoly(1, {(-2,): 1, (0,): 3, (1,): 5})
    assert nehari_kernel(lex1, phi) == {(2,): 1, (0,): 3}


def test_form_norm_rank_one(lex1):
    assert form_norm(lex1, {(0,): 1}, [(0,), (1,)]) == pytest.approx(1.0)


def test_nehari_easy_direction(functional2, corpus2, grid2):
    for phi in corpus2:
        kernel = nehari_kernel(functional2, phi)
        value = form_norm(functional2, kernel, Box.symmetric(2, 3))
        assert value <= phi.sup_norm_lower(grid2) * 1.02
