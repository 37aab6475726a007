"""Small hand-checkable examples, mostly in one variable.

They are printed by the 'demo' command and re-verified by the check suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from typing import Any

import numpy as np

from ordered_harmonics.bmo import (
    SolverConfig,
    def2_upper,
    hankel_seminorm,
    star_upper_optimize,
    to_star,
)
from ordered_harmonics.hankel import (
    apply_hankel,
    form_norm,
    gamma_kernel,
    gamma_matrix,
    hankel_matrix,
    operator_norm,
    unitary_transfer,
)
from ordered_harmonics.ordered_group import OrderSpec
from ordered_harmonics.transforms import hilbert
from ordered_harmonics.trigpoly import GridSpec, TrigPoly

EXAMPLE_TOLERANCE = 1e-9


class Relation(StrEnum):
    EQUAL = "=="
    AT_MOST = "<="


@dataclass(frozen=True)
class WorkedExample:
    name: str
    note: str
    expected: Any
    actual: Any
    relation: Relation = Relation.EQUAL

    @property
    def matches(self) -> bool:
        expected = np.asarray(self.expected, dtype=np.complex128)
        actual = np.asarray(self.actual, dtype=np.complex128)
        if self.relation == Relation.AT_MOST:
            return bool(np.all(actual.real <= expected.real + EXAMPLE_TOLERANCE))
        return expected.shape == actual.shape and bool(
            np.allclose(actual, expected, rtol=0, atol=EXAMPLE_TOLERANCE)
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "note": self.note,
            "relation": str(self.relation),
            "expected": _jsonable(self.expected),
            "actual": _jsonable(self.actual),
            "matches": self.matches,
        }


def _jsonable(value: Any) -> Any:  # noqa: ANN401
    array = np.asarray(value, dtype=np.complex128)
    if np.all(array.imag == 0):
        return array.real.tolist()
    return {"re": array.real.tolist(), "im": array.imag.tolist()}


def _chi(*k: int) -> TrigPoly:
    return TrigPoly.character(k)


def worked_examples() -> list[WorkedExample]:
    lex1 = OrderSpec.lex(1)
    lex2 = OrderSpec.lex(2)
    grid = GridSpec.default(1)
    cosine = TrigPoly(1, {(1,): 0.5, (-1,): 0.5})
    sine = TrigPoly(1, {(1,): -0.5j, (-1,): 0.5j})
    rows, cols = [(-1,), (-2,)], [(0,), (1,)]

    gamma = gamma_matrix(lex1, gamma_kernel(lex1, _chi(-1)), [(0,)])
    transferred = unitary_transfer(lex1, gamma)
    f1, g1 = to_star(lex1, TrigPoly.zero(1), cosine)
    optimized = star_upper_optimize(
        lex1, _chi(-1) + _chi(1), grid, solver=SolverConfig(iters=100)
    )
    golden = hankel_matrix(lex1, _chi(-1) + _chi(-2), rows, cols)
    conjugate = hilbert(lex1, cosine)
    sine_norms = hankel_seminorm(lex1, sine)

    return [
        WorkedExample(
            "hankel_matrix(χ₋₁)",
            "rows [-1, -2], cols [0, 1]: only φ̂(-1) is read",
            [[1, 0], [0, 0]],
            hankel_matrix(lex1, _chi(-1), rows, cols).entries,
        ),
        WorkedExample(
            "hankel_matrix(χ₋₂)",
            "entries φ̂(ξ - χ) hit -2 at (-1, 1) and (-2, 0)",
            [[0, 1], [1, 0]],
            hankel_matrix(lex1, _chi(-2), rows, cols).entries,
        ),
        WorkedExample(
            "H_φ𝟏 for φ = χ₋₁",
            "P₋(χ₋₁ · 𝟏) = χ₋₁",
            1,
            apply_hankel(lex1, _chi(-1), TrigPoly.constant(1, 1)).coefficient((-1,)),
        ),
        WorkedExample(
            "H_φχ₁ for φ = χ₋₁",
            "the product is 𝟏, which P₋ removes",
            0,
            len(apply_hankel(lex1, _chi(-1), _chi(1))),
        ),
        WorkedExample(
            "a_Γ(0) for φ = χ₋₁",
            "a_Γ(χ) = φ̂(-χ - χ₁)",
            1,
            gamma_kernel(lex1, _chi(-1)).get((0,), 0),
        ),
        WorkedExample(
            "a_Γ((0,0)) for φ = χ₍₀,₋₁₎, lexicographic n=2",
            "-(0,0) - (0,1) = (0,-1)",
            1,
            gamma_kernel(lex2, _chi(0, -1)).get((0, 0), 0),
        ),
        WorkedExample(
            "Γ with kernel 1_{1} on {0, 1}",
            "entries depend on the index sum only: antidiagonal",
            [[0, 1], [1, 0]],
            gamma_matrix(lex1, {(1,): 1}, [(0,), (1,)]).entries,
        ),
        WorkedExample(
            "transfer of Γ(χ₋₁) on {0}",
            "row 0 is relabelled -0 - 1 = -1, entry kept",
            [-1, 1],
            [transferred.rows[0][0], transferred.entries[0, 0]],
        ),
        WorkedExample(
            "‖H_φ‖ for φ = χ₋₁ + χ₋₂",
            "matrix [[1, 1], [1, 0]] has norm (1 + √5)/2",
            (1 + np.sqrt(5)) / 2,
            operator_norm(golden).value,
        ),
        WorkedExample(
            "form norm of k = 1_{0} on {0, 1}",
            "rank-one form",
            1,
            form_norm(lex1, {(0,): 1}, [(0,), (1,)]),
        ),
        WorkedExample(
            "conjugate of cos",
            "hilbert(cos) = sin: coefficients at 1 and -1",
            [-0.5j, 0.5j],
            [conjugate.coefficient((1,)), conjugate.coefficient((-1,))],
        ),
        WorkedExample(
            "‖H_φ‖, ‖H_φ̄‖ for φ = sin",
            "coefficients ±i/2 give rank-one matrices",
            [0.5, 0.5],
            [sine_norms.hankel_norm, sine_norms.conj_hankel_norm],
        ),
        WorkedExample(
            "‖φ‖_H for φ = χ₁",
            "‖H_φ‖ = 0 and ‖H_φ̄‖ = 1",
            1,
            hankel_seminorm(lex1, _chi(1)).value,
        ),
        WorkedExample(
            "def2 bound of 0 + cos̃",
            "the witness sin-polynomial is assembled from g = cos",
            1,
            def2_upper(lex1, TrigPoly.zero(1), cosine, grid).bound,
        ),
        WorkedExample(
            "star witnesses of 0 + cos̃",
            "f₁ = i·cos and g₁ = -i·cos, coefficient at 1",
            [0.5j, -0.5j],
            [f1.coefficient((1,)), g1.coefficient((1,))],
        ),
        WorkedExample(
            "star bound of χ₋₁ + χ₁",
            "feasible start f₁ = χ₋₁, g₁ = χ₁; the optimizer never does worse",
            1,
            optimized.bound,
            Relation.AT_MOST,
        ),
    ]
