from __future__ import annotations

import itertools
from typing import TYPE_CHECKING

import numpy as np

from ordered_harmonics.checks.base import (
    IDENTITY_TOLERANCE,
    Check,
    coefficient_error,
    matrix_error,
)
from ordered_harmonics.hankel import (
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
from ordered_harmonics.ordered_group import Box, Cone, OrderSpec
from ordered_harmonics.transforms import p_minus, p_plus

if TYPE_CHECKING:  # pragma: no cover
    from ordered_harmonics.checks.base import VerifyContext

TRANSFER_CASES = 50
SHIFTS_PER_SYMBOL = 5
# agreement of power iteration with a dense SVD
SVD_TOLERANCE = 1e-9


class IndexBijectionCheck(Check):
    check_name = "index-bijection"
    description = "χ ↦ -χ - χ₁ maps box positives one-to-one onto negatives"
    requires_minimal_positive = True

    def verify(self, context: VerifyContext) -> None:
        orders = {context.order, *(OrderSpec.lex(n) for n in (1, 2, 3))}
        for order in sorted(orders, key=lambda o: o.n):
            box = Box.symmetric(order.n, 2)
            positives = order.enumerate_cone(box, Cone.POSITIVE)
            negatives = order.enumerate_cone(box, Cone.NEGATIVE)
            images = [order.j_map(chi) for chi in positives]
            self.expect(
                f"images negative (n={order.n})",
                condition=all(order.in_cone(xi, Cone.NEGATIVE) for xi in images),
            )
            self.expect(
                f"injective (n={order.n})", condition=len(set(images)) == len(images)
            )
            self.expect(
                f"left inverse (n={order.n})",
                condition=all(
                    order.j_map_inverse(xi) == chi
                    for chi, xi in zip(positives, images, strict=True)
                ),
            )
            self.expect(
                f"onto negatives (n={order.n})",
                condition=all(
                    order.j_map(order.j_map_inverse(xi)) == xi for xi in negatives
                ),
            )


class UnitaryTransferCheck(Check):
    check_name = "unitary-transfer"
    description = "Γ relabelled into the H_φ form has identical entries and norm"
    requires_minimal_positive = True

    def verify(self, context: VerifyContext) -> None:
        order = context.order
        for index, phi in enumerate(context.corpus[:TRANSFER_CASES]):
            box = Box.symmetric(order.n, max(phi.max_degree(), 1))
            gamma = gamma_matrix(order, gamma_kernel(order, phi), box)
            transferred = unitary_transfer(order, gamma)
            direct = hankel_matrix(order, phi, transferred.rows, transferred.cols)
            self.expect(
                f"entries #{index}",
                condition=np.array_equal(transferred.entries, direct.entries),
            )
            self.expect(
                f"norm #{index}",
                condition=operator_norm(gamma, context.tol).value
                == operator_norm(transferred, context.tol).value,
            )
            self.expect(
                f"reverse #{index}",
                condition=unitary_transfer(order, transferred).rows == gamma.rows,
            )


class HankelExactnessCheck(Check):
    check_name = "hankel-exactness"
    description = "n=1 truncations covering the symbol match a dense SVD"

    def applies_to(self, context: VerifyContext) -> str | None:
        if context.order.n != 1:
            return "finite truncations are exact only for n = 1"
        return None

    def verify(self, context: VerifyContext) -> None:
        order = context.order
        for index, phi in enumerate(context.corpus):
            boxes = TruncationBoxes.for_symbol(order, phi)
            for label, symbol in (("H_φ", phi), ("H_φ̄", phi.conj())):
                truncation = hankel_matrix(order, symbol, boxes.neg_rows, boxes.pos_cols)
                oracle = float(np.linalg.svd(truncation.entries, compute_uv=False)[0])
                value = operator_norm(truncation, context.tol).value
                self.record(
                    f"{label} #{index}",
                    abs(value - oracle) / max(1.0, oracle),
                    SVD_TOLERANCE,
                )


class SymbolLocalityCheck(Check):
    check_name = "symbol-locality"
    description = "H_φ depends only on P₋φ"

    def verify(self, context: VerifyContext) -> None:
        order = context.order
        for index, phi in enumerate(context.corpus):
            boxes = TruncationBoxes.for_symbol(order, phi)
            full = hankel_matrix(order, phi, boxes.neg_rows, boxes.pos_cols)
            local = hankel_matrix(
                order, p_minus(order, phi), boxes.neg_rows, boxes.pos_cols
            )
            self.expect(
                f"locality #{index}",
                condition=np.array_equal(full.entries, local.entries),
            )


class MatrixActionCheck(Check):
    check_name = "matrix-action"
    description = "truncation times coefficients equals P₋(φf) on the rows"

    def verify(self, context: VerifyContext) -> None:
        order = context.order
        corpus = context.corpus
        partners = corpus[1:] + corpus[:1]
        for index, (phi, g) in enumerate(zip(corpus, partners, strict=True)):
            boxes = TruncationBoxes.for_symbol(order, phi)
            cols = set(boxes.pos_cols)
            f = p_plus(order, g).restrict(lambda k, cols=cols: k in cols)
            truncation = hankel_matrix(order, phi, boxes.neg_rows, boxes.pos_cols)
            rows = set(boxes.neg_rows)
            action = apply_hankel(order, phi, f).restrict(lambda k, rows=rows: k in rows)
            self.record(
                f"action #{index}",
                coefficient_error(apply_hankel_vector(truncation, f), action),
                IDENTITY_TOLERANCE,
            )


class AdjointIdentityCheck(Check):
    check_name = "adjoint-identity"
    description = "H_φ* equals P₊H_φ̄ on H²₋ entrywise"

    def verify(self, context: VerifyContext) -> None:
        order = context.order
        for index, phi in enumerate(context.corpus[:TRANSFER_CASES]):
            boxes = TruncationBoxes.for_symbol(order, phi)
            truncation = hankel_matrix(order, phi, boxes.neg_rows, boxes.pos_cols)
            adjoint = adjoint_hankel_matrix(order, phi, boxes.pos_cols, boxes.neg_rows)
            self.record(
                f"adjoint #{index}",
                matrix_error(truncation.entries.conj().T, adjoint),
                IDENTITY_TOLERANCE,
            )


class ShiftIntertwiningCheck(Check):
    check_name = "shift-intertwining"
    description = "H_φ S_χ = P₋ S_χ H_φ away from the truncation edge"

    def verify(self, context: VerifyContext) -> None:
        order = context.order
        shifts = order.enumerate_cone(Box.symmetric(order.n, 2), Cone.POSITIVE)
        shifts = shifts[:SHIFTS_PER_SYMBOL]
        for index, phi in enumerate(context.corpus[:TRANSFER_CASES]):
            boxes = TruncationBoxes.for_symbol(order, phi)
            scale = max(1.0, max((abs(v) for _, v in phi.items()), default=0.0))
            for chi in shifts:
                sides = shift_compress(order, chi, phi, boxes.neg_rows, boxes.pos_cols)
                self.record(
                    f"shift {chi} #{index}",
                    sides.interior_error() / scale,
                    IDENTITY_TOLERANCE,
                )


class TruncationMonotonicityCheck(Check):
    check_name = "truncation-monotonicity"
    description = "truncated norms never decrease as the boxes grow"

    def verify(self, context: VerifyContext) -> None:
        order = context.order
        for index, phi in enumerate(context.corpus[:TRANSFER_CASES]):
            boxes = TruncationBoxes.for_symbol(order, phi)
            radius = max(phi.max_degree(), 1)
            norms = []
            for grow in range(3):
                boxes = boxes.nested(order, radius + grow)
                truncation = hankel_matrix(order, phi, boxes.neg_rows, boxes.pos_cols)
                norms.append(operator_norm(truncation, context.tol).value)
            for smaller, larger in itertools.pairwise(norms):
                self.record(
                    f"monotone #{index}",
                    max(smaller - larger, 0.0) / max(1.0, larger),
                    10 * context.tol,
                )


class NehariEasyDirectionCheck(Check):
    check_name = "nehari-easy-direction"
    description = "Hankel form norm of k(χ) = φ̂(-χ) is at most ‖φ‖∞"

    def verify(self, context: VerifyContext) -> None:
        order = context.order
        fine = context.grid.refine()
        for index, phi in enumerate(context.corpus):
            box = Box.symmetric(order.n, max(phi.max_degree(), 1))
            value = form_norm(order, nehari_kernel(order, phi), box, context.tol)
            bound = phi.sup_norm_lower(fine) + context.slack * phi.l2_norm()
            self.record(f"form #{index}", max(value - bound, 0.0), 0.0)

