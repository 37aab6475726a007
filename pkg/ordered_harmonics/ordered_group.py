"""Character-group arithmetic on ℤⁿ with a pluggable linear order.

Characters of the torus Tⁿ are written additively as integer vectors: the product of
two characters is the sum of their indices, the conjugate character is the negated
index and the unit character is the zero vector.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from functools import cached_property
from typing import TYPE_CHECKING, Any

import jsonschema
import jsonschema.exceptions

from ordered_harmonics.exceptions import (
    ConeViolationError,
    DimensionMismatchError,
    InvalidOrderSpecError,
    NoMinimalPositiveError,
)
from ordered_harmonics.utils.validate.schemas import ORDER_SPEC

if TYPE_CHECKING:  # pragma: no cover
    from collections.abc import Iterable, Iterator

logger = logging.getLogger(__name__)

CharacterIndex = tuple[int, ...]

# functional-order coefficients are replaced by rationals with bounded denominator
ALPHA_DENOMINATOR_BOUND = 10**9


class OrderKind(StrEnum):
    LEX = "lex"
    FUNCTIONAL = "functional"


class Cone(StrEnum):
    POSITIVE = "positive"  # X₊, the unit character included
    NEGATIVE = "negative"  # X₋ = X \ X₊


class Comparison(StrEnum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


def add_indices(j: CharacterIndex, k: CharacterIndex) -> CharacterIndex:
    return tuple(a + b for a, b in zip(j, k, strict=True))


def subtract_indices(j: CharacterIndex, k: CharacterIndex) -> CharacterIndex:
    return tuple(a - b for a, b in zip(j, k, strict=True))


def negate_index(k: CharacterIndex) -> CharacterIndex:
    return tuple(-a for a in k)


def zero_index(n: int) -> CharacterIndex:
    return (0,) * n


@dataclass(frozen=True)
class Box:
    """A finite box of integer points, inclusive on both ends."""

    lows: tuple[int, ...]
    highs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.lows) != len(self.highs) or not self.lows:
            raise ValueError("Box bounds must be non-empty and of equal length")
        if any(low > high for low, high in zip(self.lows, self.highs, strict=True)):
            raise ValueError(f"Box has inverted bounds: {self.lows} > {self.highs}")

    @property
    def n(self) -> int:
        return len(self.lows)

    @property
    def size(self) -> int:
        size = 1
        for low, high in zip(self.lows, self.highs, strict=True):
            size *= high - low + 1
        return size

    @classmethod
    def symmetric(cls, n: int, radius: int) -> Box:
        return cls(lows=(-radius,) * n, highs=(radius,) * n)

    @classmethod
    def covering(cls, indices: Iterable[CharacterIndex], n: int, inflate: int = 0) -> Box:
        """Smallest box containing the given indices, grown by 'inflate' per side.

        An empty collection of indices yields the box around the origin.
        """
        indices = list(indices)
        if not indices:
            return cls.symmetric(n, inflate)
        lows = tuple(min(k[i] for k in indices) - inflate for i in range(n))
        highs = tuple(max(k[i] for k in indices) + inflate for i in range(n))
        return cls(lows=lows, highs=highs)

    def contains(self, k: CharacterIndex) -> bool:
        bounds = zip(k, self.lows, self.highs, strict=True)
        return len(k) == self.n and all(low <= a <= high for a, low, high in bounds)

    def points(self) -> Iterator[CharacterIndex]:
        ranges = [
            range(low, high + 1) for low, high in zip(self.lows, self.highs, strict=True)
        ]
        yield from itertools.product(*ranges)

    def to_dict(self) -> dict[str, list[int]]:
        return {"lows": list(self.lows), "highs": list(self.highs)}


@dataclass(frozen=True)
class OrderSpec:
    """A linear order on ℤⁿ given by the sign of its positive cone.

    Two kinds are supported:

    * lexicographic, compared most-significant coordinate first, whose least
      positive element is (0, ..., 0, 1);
    * a linear functional k ↦ α·k with (ideally irrational) coefficients, whose
      positive cone has no least element. It exists to exercise the code paths that
      need a least positive element and must refuse to run without one.
    """

    kind: OrderKind
    n: int
    alpha: tuple[float, ...] | None = field(default=None)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidOrderSpecError(f"Dimension must be at least 1, got {self.n}")
        if self.kind == OrderKind.FUNCTIONAL:
            if self.alpha is None or len(self.alpha) != self.n:
                raise InvalidOrderSpecError(
                    f"Functional order needs {self.n} coefficients, got {self.alpha}"
                )
            if self.n < 2:  # noqa: PLR2004
                raise InvalidOrderSpecError(
                    "Functional order needs n >= 2 to differ from the standard order"
                )
        elif self.alpha is not None:
            raise InvalidOrderSpecError("Lexicographic order takes no coefficients")

    @classmethod
    def lex(cls, n: int) -> OrderSpec:
        return cls(kind=OrderKind.LEX, n=n)

    @classmethod
    def functional(cls, alpha: Iterable[float]) -> OrderSpec:
        alpha = tuple(float(a) for a in alpha)
        return cls(kind=OrderKind.FUNCTIONAL, n=len(alpha), alpha=alpha)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> OrderSpec:
        """Create instance from the JSON form of an order.

        Raises:
            InvalidOrderSpecError: If the data fails schema validation.
        """
        try:
            jsonschema.validate(instance=data, schema=ORDER_SPEC)
        except jsonschema.exceptions.ValidationError as exception:
            raise InvalidOrderSpecError(
                f"Order spec failed schema validation: {exception.message}"
            ) from exception
        alpha = data.get("alpha")
        return cls(
            kind=OrderKind(data["kind"]),
            n=data["n"],
            alpha=tuple(float(a) for a in alpha) if alpha is not None else None,
        )

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"kind": str(self.kind), "n": self.n}
        if self.alpha is not None:
            data["alpha"] = list(self.alpha)
        return data

    @cached_property
    def _rational_alpha(self) -> tuple[Fraction, ...]:
        return tuple(
            Fraction(a).limit_denominator(ALPHA_DENOMINATOR_BOUND)
            for a in self.alpha or ()
        )

    @property
    def has_minimal_positive(self) -> bool:
        return self.kind == OrderKind.LEX

    def check_dimension(self, k: CharacterIndex) -> None:
        if len(k) != self.n:
            raise DimensionMismatchError(expected=self.n, actual=len(k))

    def _functional_value(self, k: CharacterIndex) -> Fraction:
        return sum(
            (a * c for a, c in zip(self._rational_alpha, k, strict=True)), Fraction(0)
        )

    @staticmethod
    def _lex_sign(k: CharacterIndex) -> int:
        for coordinate in k:
            if coordinate:
                return 1 if coordinate > 0 else -1
        return 0

    def cone_sign(self, k: CharacterIndex) -> int:
        """Return +1 on X₊ without the unit character, 0 at the unit, -1 on X₋."""
        self.check_dimension(k)
        if self.kind == OrderKind.FUNCTIONAL:
            value = self._functional_value(k)
            if value:
                return 1 if value > 0 else -1
            # ties only arise from the rational approximation of α
        return self._lex_sign(k)

    def sort_key(self, k: CharacterIndex) -> tuple:
        """Key function that sorts indices ascending in this order."""
        self.check_dimension(k)
        if self.kind == OrderKind.FUNCTIONAL:
            return (self._functional_value(k), k)
        return k

    def compare(self, j: CharacterIndex, k: CharacterIndex) -> Comparison:
        self.check_dimension(j)
        self.check_dimension(k)
        sign = self.cone_sign(subtract_indices(k, j))
        if sign > 0:
            return Comparison.LESS
        if sign < 0:
            return Comparison.GREATER
        return Comparison.EQUAL

    def sort(self, indices: Iterable[CharacterIndex]) -> list[CharacterIndex]:
        return sorted(indices, key=self.sort_key)

    def minimal_positive(self) -> CharacterIndex:
        """Return χ₁, the least element of X₊ without the unit character.

        Raises:
            NoMinimalPositiveError: For the functional order, where points with
                0 < α·k < ε exist for every ε > 0.
        """
        if not self.has_minimal_positive:
            raise NoMinimalPositiveError(order_kind=str(self.kind))
        return (0,) * (self.n - 1) + (1,)

    def in_cone(self, k: CharacterIndex, which: Cone) -> bool:
        sign = self.cone_sign(k)
        return sign >= 0 if which == Cone.POSITIVE else sign < 0

    def enumerate_cone(self, box: Box, which: Cone) -> list[CharacterIndex]:
        """List the points of a box lying in one cone, ascending in this order."""
        if box.n != self.n:
            raise DimensionMismatchError(expected=self.n, actual=box.n)
        return self.sort(k for k in box.points() if self.in_cone(k, which))

    def j_map(self, k: CharacterIndex) -> CharacterIndex:
        """Map a positive index χ to the negative index −χ − χ₁.

        This is the bijection X₊ → X₋ that carries the Hankel matrix on ℓ²(X₊) to the
        Hankel operator H²(G) → H²₋(G).
        """
        chi_1 = self.minimal_positive()
        if self.cone_sign(k) < 0:
            raise ConeViolationError(f"Index {k} is not in the positive cone")
        return subtract_indices(negate_index(k), chi_1)

    def j_map_inverse(self, xi: CharacterIndex) -> CharacterIndex:
        chi_1 = self.minimal_positive()
        if self.cone_sign(xi) >= 0:
            raise ConeViolationError(f"Index {xi} is not in the negative cone")
        return subtract_indices(negate_index(xi), chi_1)
