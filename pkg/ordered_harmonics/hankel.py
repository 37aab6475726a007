"""Hankel operators in both realizations and their finite truncations.

* The operator form H_φ: H² → H²₋, f ↦ P₋(φf), has matrix entries φ̂(ξ − χ) for
  rows ξ ∈ X₋ and columns χ ∈ X₊.
* The matrix form Γ on ℓ²(X₊) has entries a(χ + ξ) that depend only on the index
  sum; for a symbol φ its kernel is a_Γ(χ) = φ̂(−χ − χ₁).

Truncations are dense matrices over explicit, ordered index lists. Norms of
truncations are lower bounds on the norms of the untruncated operators.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING, Any

import numpy as np

from ordered_harmonics.exceptions import (
    ConeViolationError,
    DimensionMismatchError,
    InvalidRunConfigError,
    NoConvergenceError,
    NotAnalyticError,
)
from ordered_harmonics.ordered_group import (
    Box,
    CharacterIndex,
    Cone,
    OrderSpec,
    add_indices,
    negate_index,
    subtract_indices,
)
from ordered_harmonics.transforms import p_minus, p_plus
from ordered_harmonics.trigpoly import TrigPoly

if TYPE_CHECKING:  # pragma: no cover
    from collections.abc import Iterable, Mapping, Sequence

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITERS = 5000
DEFAULT_BLOCK_SIZE = 12
MAX_MATRIX_DIMENSION = 4096

Kernel = dict[CharacterIndex, complex]


class HankelForm(StrEnum):
    OPERATOR = "operator"  # H_φ: rows in X₋, columns in X₊
    GAMMA = "gamma"  # Γ on ℓ²(X₊): rows and columns in X₊


@dataclass(frozen=True)
class HankelTruncation:
    """A finite dense slice of a Hankel operator with its index labels."""

    rows: tuple[CharacterIndex, ...]
    cols: tuple[CharacterIndex, ...]
    entries: np.ndarray
    form: HankelForm
    provenance: str = ""

    def __post_init__(self) -> None:
        if self.entries.shape != (len(self.rows), len(self.cols)):
            raise ValueError(
                f"Entries of shape {self.entries.shape} do not match "
                f"{len(self.rows)} rows and {len(self.cols)} columns"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def to_dict(self) -> dict[str, Any]:
        return {
            "form": str(self.form),
            "provenance": self.provenance,
            "rows": [list(k) for k in self.rows],
            "cols": [list(k) for k in self.cols],
            "re": self.entries.real.tolist(),
            "im": self.entries.imag.tolist(),
        }


@dataclass(frozen=True)
class TruncationBoxes:
    """Row indices in X₋ and column indices in X₊ of an operator-form truncation."""

    neg_rows: tuple[CharacterIndex, ...]
    pos_cols: tuple[CharacterIndex, ...]

    def __post_init__(self) -> None:
        if max(len(self.neg_rows), len(self.pos_cols)) > MAX_MATRIX_DIMENSION:
            raise InvalidRunConfigError(
                f"Truncation of {len(self.neg_rows)}x{len(self.pos_cols)} exceeds the "
                f"matrix dimension limit {MAX_MATRIX_DIMENSION}"
            )

    @classmethod
    def for_box(cls, order: OrderSpec, box: Box) -> TruncationBoxes:
        """Truncation to the box, refused before enumeration when it cannot fit.

        The two cones partition the box, so the larger one holds at least half of
        its points and the box size alone decides an oversized truncation.
        """
        least_cone = box.size // 2
        if least_cone > MAX_MATRIX_DIMENSION:
            raise InvalidRunConfigError(
                f"Box {box.to_dict()} gives a truncation of at least {least_cone} "
                f"indices, over the matrix dimension limit {MAX_MATRIX_DIMENSION}"
            )
        return cls(
            neg_rows=tuple(order.enumerate_cone(box, Cone.NEGATIVE)),
            pos_cols=tuple(order.enumerate_cone(box, Cone.POSITIVE)),
        )

    @classmethod
    def for_symbol(
        cls, order: OrderSpec, phi: TrigPoly, radius: int | None = None
    ) -> TruncationBoxes:
        """Symmetric box covering the spectrum of φ (and so of its conjugate).

        For n = 1 this truncation already contains every nonzero entry of H_φ and
        H_φ̄, so its norms are exact.
        """
        if radius is None:
            radius = max(phi.max_degree(), 1)
        return cls.for_box(order, Box.symmetric(order.n, radius))

    def nested(self, order: OrderSpec, radius: int) -> TruncationBoxes:
        """Grow to the symmetric box of the given radius, keeping current indices."""
        grown = TruncationBoxes.for_box(order, Box.symmetric(order.n, radius))
        return TruncationBoxes(
            neg_rows=tuple(order.sort(set(self.neg_rows) | set(grown.neg_rows))),
            pos_cols=tuple(order.sort(set(self.pos_cols) | set(grown.pos_cols))),
        )


@dataclass(frozen=True)
class OperatorNorm:
    """Largest singular value of a truncation, with singular-vector witnesses.

    The value is ‖T v‖ for a unit vector v, so it never exceeds the true norm.
    """

    value: float
    right: np.ndarray = field(repr=False)
    left: np.ndarray = field(repr=False)
    iterations: int = 0
    gap: float = 0.0


@dataclass(frozen=True)
class ShiftCompression:
    """Both sides of H_φ S_χ = P₋ S_χ H_φ over the same rows and columns.

    'interior' marks rows whose value on the right side is not cut off by the finite
    row set of the source truncation.
    """

    rows: tuple[CharacterIndex, ...]
    cols: tuple[CharacterIndex, ...]
    left: np.ndarray
    right: np.ndarray
    interior: np.ndarray

    def interior_error(self) -> float:
        if not self.interior.any():
            return 0.0
        difference = self.left[self.interior] - self.right[self.interior]
        return float(np.max(np.abs(difference), initial=0.0))


def _check_symbol(order: OrderSpec, phi: TrigPoly) -> None:
    if phi.n != order.n:
        raise DimensionMismatchError(expected=order.n, actual=phi.n)


def _check_cone(order: OrderSpec, indices: Iterable[CharacterIndex], which: Cone) -> None:
    for k in indices:
        if not order.in_cone(k, which):
            raise ConeViolationError(f"Index {k} is not in the {which} cone")


def apply_hankel(order: OrderSpec, phi: TrigPoly, f: TrigPoly) -> TrigPoly:
    """Return H_φ f = P₋(φ f) for a polynomial f of analytic type.

    Raises:
        NotAnalyticError: If f has a coefficient on X₋.
    """
    _check_symbol(order, phi)
    if not p_minus(order, f).is_zero():
        raise NotAnalyticError
    return p_minus(order, phi.multiply(f))


def hankel_matrix(
    order: OrderSpec,
    phi: TrigPoly,
    neg_rows: Sequence[CharacterIndex],
    pos_cols: Sequence[CharacterIndex],
    provenance: str = "",
) -> HankelTruncation:
    """Operator-form truncation with entries ⟨H_φ χ, ξ⟩ = φ̂(ξ − χ)."""
    _check_symbol(order, phi)
    _check_cone(order, neg_rows, Cone.NEGATIVE)
    _check_cone(order, pos_cols, Cone.POSITIVE)
    entries = np.zeros((len(neg_rows), len(pos_cols)), dtype=np.complex128)
    for i, xi in enumerate(neg_rows):
        for j, chi in enumerate(pos_cols):
            entries[i, j] = phi.coeffs.get(subtract_indices(xi, chi), 0j)
    return HankelTruncation(
        rows=tuple(neg_rows),
        cols=tuple(pos_cols),
        entries=entries,
        form=HankelForm.OPERATOR,
        provenance=provenance,
    )


def adjoint_hankel_matrix(
    order: OrderSpec,
    phi: TrigPoly,
    pos_rows: Sequence[CharacterIndex],
    neg_cols: Sequence[CharacterIndex],
) -> np.ndarray:
    """Matrix of P₊H_φ̄ restricted to H²₋, assembled from products and projections.

    Column ξ holds the coefficients of P₊(φ̄ · ξ) on the rows; the result must equal
    the conjugate transpose of the operator-form truncation of φ.
    """
    _check_symbol(order, phi)
    _check_cone(order, pos_rows, Cone.POSITIVE)
    _check_cone(order, neg_cols, Cone.NEGATIVE)
    conjugate = phi.conj()
    entries = np.zeros((len(pos_rows), len(neg_cols)), dtype=np.complex128)
    for j, xi in enumerate(neg_cols):
        column = p_plus(order, conjugate.multiply(TrigPoly.character(xi)))
        for i, chi in enumerate(pos_rows):
            entries[i, j] = column.coeffs.get(chi, 0j)
    return entries


def apply_hankel_vector(truncation: HankelTruncation, f: TrigPoly) -> TrigPoly:
    """Apply a truncation to the coefficients of f on its columns."""
    vector = np.array([f.coeffs.get(chi, 0j) for chi in truncation.cols])
    values = truncation.entries @ vector
    return TrigPoly(f.n, dict(zip(truncation.rows, values, strict=True)))


def gamma_kernel(order: OrderSpec, phi: TrigPoly) -> Kernel:
    """Nonzero values of a_Γ(χ) = φ̂(−χ − χ₁) on X₊.

    Raises:
        NoMinimalPositiveError: If the order has no least positive element.
    """
    _check_symbol(order, phi)
    order.minimal_positive()
    return {
        order.j_map_inverse(xi): value
        for xi, value in phi.items()
        if order.cone_sign(xi) < 0
    }


def _positive_indices(
    order: OrderSpec, positives: Box | Sequence[CharacterIndex]
) -> tuple[CharacterIndex, ...]:
    if isinstance(positives, Box):
        return tuple(order.enumerate_cone(positives, Cone.POSITIVE))
    return tuple(positives)


def gamma_matrix(
    order: OrderSpec,
    kernel: Mapping[CharacterIndex, complex],
    positives: Box | Sequence[CharacterIndex],
    provenance: str = "",
) -> HankelTruncation:
    """Matrix-form truncation with entries a(χ + ξ); symmetric by construction."""
    indices = _positive_indices(order, positives)
    size = len(indices)
    entries = np.zeros((size, size), dtype=np.complex128)
    for i, xi in enumerate(indices):
        for j, chi in enumerate(indices[i:], start=i):
            value = kernel.get(add_indices(xi, chi), 0j)
            entries[i, j] = value
            entries[j, i] = value
    return HankelTruncation(
        rows=indices,
        cols=indices,
        entries=entries,
        form=HankelForm.GAMMA,
        provenance=provenance,
    )


def _start_block(size: int, width: int) -> np.ndarray:
    """Deterministic orthonormal start block whose first column is all-ones."""
    rng = np.random.default_rng(0)
    block = rng.standard_normal((size, width)).astype(np.complex128)
    block[:, 0] = 1.0
    return np.linalg.qr(block)[0]


def operator_norm(
    truncation: HankelTruncation | np.ndarray,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> OperatorNorm:
    """Largest singular value by block power iteration on T*T.

    The block starts from the normalized all-ones vector (completed by a fixed-seed
    block) and is re-orthonormalized each step; the largest Rayleigh-Ritz value is
    tracked until its relative change falls below 'tol'.

    Raises:
        NoConvergenceError: If 'max_iters' steps do not reach the tolerance.
    """
    if tol <= 0:
        raise ValueError(f"Tolerance must be positive, got {tol}")
    matrix = (
        truncation.entries if isinstance(truncation, HankelTruncation) else truncation
    )
    matrix = np.asarray(matrix, dtype=np.complex128)
    n_rows, n_cols = matrix.shape
    if matrix.size == 0 or not np.any(matrix):
        return OperatorNorm(
            value=0.0,
            right=np.zeros(n_cols, dtype=np.complex128),
            left=np.zeros(n_rows, dtype=np.complex128),
        )

    gram = matrix.conj().T @ matrix
    block = _start_block(n_cols, min(block_size, n_cols))
    previous = 0.0
    gap = np.inf
    for iteration in range(1, max_iters + 1):
        block = np.linalg.qr(gram @ block)[0]
        ritz_values, ritz_vectors = np.linalg.eigh(block.conj().T @ gram @ block)
        value = float(ritz_values[-1])
        gap = abs(value - previous) / value if value > 0 else np.inf
        previous = value
        if gap < tol:
            break
    else:
        raise NoConvergenceError(
            last_value=float(np.sqrt(max(previous, 0.0))),
            gap=float(gap),
            iterations=max_iters,
        )

    right = block @ ritz_vectors[:, -1]
    right /= np.linalg.norm(right)
    image = matrix @ right
    sigma = float(np.linalg.norm(image))
    logger.debug(
        f"Operator norm {sigma!r} of {n_rows}x{n_cols} truncation "
        f"after {iteration} iterations"
    )
    return OperatorNorm(
        value=sigma, right=right, left=image / sigma, iterations=iteration, gap=gap
    )


def unitary_transfer(order: OrderSpec, truncation: HankelTruncation) -> HankelTruncation:
    """Relabel rows between the two realizations, keeping the entries untouched.

    A matrix-form truncation has its rows mapped by χ ↦ −χ − χ₁ into X₋, which gives
    the operator form of the same symbol; an operator-form truncation is mapped back.

    Raises:
        NoMinimalPositiveError: If the order has no least positive element.
    """
    if truncation.form == HankelForm.GAMMA:
        rows = tuple(order.j_map(chi) for chi in truncation.rows)
        form = HankelForm.OPERATOR
    else:
        rows = tuple(order.j_map_inverse(xi) for xi in truncation.rows)
        form = HankelForm.GAMMA
    return HankelTruncation(
        rows=rows,
        cols=truncation.cols,
        entries=truncation.entries.copy(),
        form=form,
        provenance=truncation.provenance,
    )


def _placement(
    targets: Sequence[CharacterIndex],
    sources: Sequence[CharacterIndex],
    offset: CharacterIndex,
) -> tuple[np.ndarray, np.ndarray]:
    """0/1 matrix sending source index s to target s + offset, and a hit mask."""
    position = {k: i for i, k in enumerate(targets)}
    placement = np.zeros((len(targets), len(sources)), dtype=np.complex128)
    hit = np.zeros(len(targets), dtype=bool)
    for j, k in enumerate(sources):
        target = position.get(add_indices(k, offset))
        if target is not None:
            placement[target, j] = 1.0
            hit[target] = True
    return placement, hit


def shift_compress(
    order: OrderSpec,
    chi: CharacterIndex,
    phi: TrigPoly,
    neg_rows: Sequence[CharacterIndex],
    pos_cols: Sequence[CharacterIndex],
    source_rows: Sequence[CharacterIndex] | None = None,
) -> ShiftCompression:
    """Assemble H_φ S_χ and P₋ S_χ H_φ as matrices over the given rows and columns.

    The right side multiplies a truncation of H_φ over 'source_rows' by the shift,
    so rows ξ with ξ − χ outside the source rows leak out of the truncation. By
    default the source rows cover every ξ − χ and no row leaks.

    Raises:
        ConeViolationError: If χ is not in X₊.
    """
    order.check_dimension(chi)
    if order.cone_sign(chi) < 0:
        raise ConeViolationError(f"Shift {chi} is not in the positive cone")
    rows = tuple(neg_rows)
    cols = tuple(pos_cols)

    shifted_cols = order.sort(set(cols) | {add_indices(c, chi) for c in cols})
    column_shift, _ = _placement(shifted_cols, cols, chi)
    left = hankel_matrix(order, phi, rows, shifted_cols).entries @ column_shift

    if source_rows is None:
        source_rows = order.sort(set(rows) | {subtract_indices(r, chi) for r in rows})
    source = hankel_matrix(order, phi, source_rows, cols).entries
    row_shift, interior = _placement(rows, source_rows, chi)
    right = row_shift @ source
    return ShiftCompression(
        rows=rows, cols=cols, left=left, right=right, interior=interior
    )


def nehari_kernel(order: OrderSpec, phi: TrigPoly) -> Kernel:
    """Hankel form kernel k(χ) = φ̂(−χ) on X₊, the form bounded by ‖φ‖∞."""
    _check_symbol(order, phi)
    return {
        negate_index(k): value
        for k, value in phi.items()
        if order.cone_sign(negate_index(k)) >= 0
    }


def form_norm(
    order: OrderSpec,
    kernel: Mapping[CharacterIndex, complex],
    positives: Box | Sequence[CharacterIndex],
    tol: float = DEFAULT_TOL,
) -> float:
    """Norm of the Hankel form Σ k(χ+η) a(χ) b(η) restricted to a finite index set."""
    return operator_norm(gamma_matrix(order, kernel, positives), tol=tol).value
