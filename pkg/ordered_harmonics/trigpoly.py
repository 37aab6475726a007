"""Sparse trigonometric polynomials on the torus Tⁿ.

A `TrigPoly` is a finite map from character indices to complex Fourier coefficients
and stands in for every function space element at desk scale (L², L∞, H², H²₋).
"""

from __future__ import annotations

import json
import logging
import cmath
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from types import MappingProxyType
from typing import TYPE_CHECKING, Any

import jsonschema
import jsonschema.exceptions
import numpy as np
import smart_open

from ordered_harmonics.config import Config
from ordered_harmonics.exceptions import DimensionMismatchError, SymbolParseError
from ordered_harmonics.ordered_group import CharacterIndex, add_indices, negate_index
from ordered_harmonics.utils.validate.schemas import SYMBOL_FILE

if TYPE_CHECKING:  # pragma: no cover
    from collections.abc import Callable, Iterator, Mapping, Sequence

    from ordered_harmonics.ordered_group import OrderSpec

logger = logging.getLogger(__name__)
CONFIG = Config()

DEFAULT_GRID_POINTS = {1: 512, 2: 128, 3: 32}
FALLBACK_GRID_POINTS = 16

# grids smaller than this are evaluated in one piece
PARALLEL_MIN_POINTS = 4096


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid x_j = j / M on each of the n circles."""

    points_per_dim: int
    n: int

    def __post_init__(self) -> None:
        if self.points_per_dim < 2 or self.n < 1:  # noqa: PLR2004
            raise ValueError(
                f"Grid needs M >= 2 and n >= 1, got M={self.points_per_dim}, n={self.n}"
            )

    @classmethod
    def default(cls, n: int) -> GridSpec:
        return cls(DEFAULT_GRID_POINTS.get(n, FALLBACK_GRID_POINTS), n)

    @property
    def size(self) -> int:
        return self.points_per_dim**self.n

    def refine(self, factor: int = 2) -> GridSpec:
        return GridSpec(self.points_per_dim * factor, self.n)

    def index_points(self) -> np.ndarray:
        """Integer grid coordinates j, row-major by coordinate, shape (Mⁿ, n)."""
        axes = [np.arange(self.points_per_dim, dtype=np.int64)] * self.n
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([axis.reshape(-1) for axis in mesh], axis=1)

    def points(self) -> np.ndarray:
        return self.index_points() / self.points_per_dim

    def resolves(self, poly: TrigPoly) -> bool:
        """Whether M > 2·(max degree), so grid means reproduce exact coefficients."""
        return self.points_per_dim >= 2 * poly.max_degree() + 1


class TrigPoly:
    """Immutable sparse Fourier coefficient map φ̂ of a polynomial on Tⁿ.

    Coefficients are kept sorted by index in tuple order, which is `compare` of the
    lexicographic order; a polynomial is not tied to one order, so `ordered_items`
    and `to_symbol_dict` take an order when output must follow its `compare`.
    Coefficients whose modulus is below the drop tolerance are not stored, and exact
    zeros never are.
    """

    __slots__ = ("_coeffs", "drop_tolerance", "n")

    def __init__(
        self,
        n: int,
        coeffs: Mapping[CharacterIndex, complex] | None = None,
        drop_tolerance: float = 0.0,
    ) -> None:
        if n < 1:
            raise ValueError(f"Dimension must be at least 1, got {n}")
        self.n = n
        self.drop_tolerance = drop_tolerance
        stored: dict[CharacterIndex, complex] = {}
        for k, raw in sorted((coeffs or {}).items()):
            if len(k) != n:
                raise DimensionMismatchError(expected=n, actual=len(k))
            value = complex(raw)
            if value != 0 and not abs(value) < drop_tolerance:
                stored[tuple(int(a) for a in k)] = value
        self._coeffs = MappingProxyType(stored)

    # ---------------
    # Constructors
    # ---------------
    @classmethod
    def zero(cls, n: int) -> TrigPoly:
        return cls(n)

    @classmethod
    def constant(cls, n: int, value: complex) -> TrigPoly:
        return cls(n, {(0,) * n: value})

    @classmethod
    def character(cls, k: Sequence[int], value: complex = 1.0) -> TrigPoly:
        k = tuple(k)
        return cls(len(k), {k: value})

    # ---------------
    # Accessors
    # ---------------
    @property
    def coeffs(self) -> Mapping[CharacterIndex, complex]:
        return self._coeffs

    def coefficient(self, k: CharacterIndex) -> complex:
        self._check_index(k)
        return self._coeffs.get(k, 0j)

    def support(self) -> list[CharacterIndex]:
        return list(self._coeffs)

    def items(self) -> Iterator[tuple[CharacterIndex, complex]]:
        yield from self._coeffs.items()

    def ordered_items(
        self, order: OrderSpec
    ) -> list[tuple[CharacterIndex, complex]]:
        """Coefficients sorted by the given order's `compare`."""
        return [(k, self._coeffs[k]) for k in order.sort(self._coeffs)]

    def __len__(self) -> int:
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def max_degree(self) -> int:
        return max((max(abs(a) for a in k) for k in self._coeffs), default=0)

    def is_real(self, rel: float = 1e-12) -> bool:
        """Whether the polynomial is real-valued, i.e. f̂(−k) = conj f̂(k)."""
        return self.allclose(self.conj(), rel=rel)

    def _check_index(self, k: CharacterIndex) -> None:
        if len(k) != self.n:
            raise DimensionMismatchError(expected=self.n, actual=len(k))

    def _check_same_dimension(self, other: TrigPoly) -> None:
        if other.n != self.n:
            raise DimensionMismatchError(expected=self.n, actual=other.n)

    def _tolerance_with(self, other: TrigPoly) -> float:
        return max(self.drop_tolerance, other.drop_tolerance)

    # ---------------
    # Arithmetic
    # ---------------
    def add(self, other: TrigPoly) -> TrigPoly:
        self._check_same_dimension(other)
        total = dict(self._coeffs)
        for k, value in other.items():
            total[k] = total.get(k, 0j) + value
        return TrigPoly(self.n, total, self._tolerance_with(other))

    def scale(self, c: complex) -> TrigPoly:
        return TrigPoly(
            self.n, {k: c * value for k, value in self.items()}, self.drop_tolerance
        )

    def multiply(self, other: TrigPoly) -> TrigPoly:
        """Product of polynomials: the convolution of their coefficient maps."""
        self._check_same_dimension(other)
        product: dict[CharacterIndex, complex] = {}
        for j, a in self.items():
            for k, b in other.items():
                index = add_indices(j, k)
                product[index] = product.get(index, 0j) + a * b
        return TrigPoly(self.n, product, self._tolerance_with(other))

    def conj(self) -> TrigPoly:
        """Pointwise complex conjugate: (f̄)̂(k) = conj f̂(−k)."""
        return TrigPoly(
            self.n,
            {negate_index(k): value.conjugate() for k, value in self.items()},
            self.drop_tolerance,
        )

    def shift(self, chi: CharacterIndex) -> TrigPoly:
        """Multiplication by the character χ (the shift operator S_χ)."""
        self._check_index(chi)
        return TrigPoly(
            self.n,
            {add_indices(k, chi): value for k, value in self.items()},
            self.drop_tolerance,
        )

    def restrict(self, keep: Callable[[CharacterIndex], bool]) -> TrigPoly:
        """Keep the coefficients whose index satisfies the predicate 'keep'."""
        return TrigPoly(
            self.n,
            {k: value for k, value in self.items() if keep(k)},
            self.drop_tolerance,
        )

    def __add__(self, other: TrigPoly) -> TrigPoly:
        return self.add(other)

    def __sub__(self, other: TrigPoly) -> TrigPoly:
        return self.add(other.scale(-1))

    def __neg__(self) -> TrigPoly:
        return self.scale(-1)

    def __mul__(self, other: TrigPoly | complex) -> TrigPoly:
        if isinstance(other, TrigPoly):
            return self.multiply(other)
        return self.scale(other)

    def __rmul__(self, other: complex) -> TrigPoly:
        return self.scale(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.n == other.n and dict(self._coeffs) == dict(other.coeffs)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        terms = ", ".join(f"{k}: {value:.6g}" for k, value in self.items())
        return f"TrigPoly(n={self.n}, {{{terms}}})"

    def allclose(self, other: TrigPoly, rel: float = 1e-12) -> bool:
        """Coefficient-wise comparison relative to the larger coefficient scale."""
        self._check_same_dimension(other)
        keys = set(self._coeffs) | set(other.coeffs)
        if not keys:
            return True
        scale = max(
            1.0,
            max((abs(v) for v in self._coeffs.values()), default=0.0),
            max((abs(v) for v in other.coeffs.values()), default=0.0),
        )
        return all(
            abs(self._coeffs.get(k, 0j) - other.coeffs.get(k, 0j)) <= rel * scale
            for k in keys
        )

    # ---------------
    # Evaluation
    # ---------------
    def evaluate(self, x: Sequence[float]) -> complex:
        """Value Σ f̂(k) e^{2πi k·x} at a point of [0, 1)ⁿ."""
        if len(x) != self.n:
            raise DimensionMismatchError(expected=self.n, actual=len(x))
        total = 0j
        for k, value in self.items():
            phase = sum(a * b for a, b in zip(k, x, strict=True))
            total += value * np.exp(2j * np.pi * phase)
        return complex(total)

    def _term_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        indices = np.array(list(self._coeffs), dtype=np.int64).reshape(-1, self.n)
        values = np.array(list(self._coeffs.values()), dtype=np.complex128)
        return indices, values

    def evaluate_grid(self, grid: GridSpec) -> np.ndarray:
        """Values at all Mⁿ grid points, row-major by coordinate.

        Phases are looked up from the M-th roots of unity by the exact integer
        k·j mod M, and each point is summed in a fixed term order, so splitting the
        grid across workers gives bit-identical results.
        """
        if grid.n != self.n:
            raise DimensionMismatchError(expected=self.n, actual=grid.n)
        if self.is_zero():
            return np.zeros(grid.size, dtype=np.complex128)

        index_points = grid.index_points()
        indices, values = self._term_arrays()
        m = grid.points_per_dim
        roots = np.exp(2j * np.pi * np.arange(m) / m)

        def _evaluate_rows(rows: np.ndarray) -> np.ndarray:
            exponents = np.mod(rows @ indices.T, m)
            return (roots[exponents] * values).sum(axis=1)

        workers = min(CONFIG.threads, max(1, grid.size // PARALLEL_MIN_POINTS))
        if workers == 1:
            return _evaluate_rows(index_points)
        chunks = np.array_split(index_points, workers)
        logger.debug(f"Evaluating {grid.size} grid points with {workers} workers")
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return np.concatenate(list(executor.map(_evaluate_rows, chunks)))

    # ---------------
    # Norms
    # ---------------
    def sup_norm_lower(self, grid: GridSpec) -> float:
        """Largest modulus on the grid; always a lower bound of ‖f‖∞."""
        if self.is_zero():
            return 0.0
        return float(np.max(np.abs(self.evaluate_grid(grid))))

    def lp_norm_estimate(self, p: float, grid: GridSpec) -> float:
        """Quadrature estimate of ‖f‖_p (uniform weights, exact for trig sums)."""
        if not 1 <= p < np.inf:
            raise ValueError(f"p must lie in [1, inf), got {p}")
        if self.is_zero():
            return 0.0
        moduli = np.abs(self.evaluate_grid(grid))
        return float(np.mean(moduli**p) ** (1 / p))

    def l2_norm(self) -> float:
        """Exact L² norm from the coefficients (characters are orthonormal)."""
        return float(np.sqrt(sum(abs(value) ** 2 for value in self._coeffs.values())))

    def inner(self, other: TrigPoly) -> complex:
        """L² inner product ⟨f, g⟩ = Σ f̂(k) conj ĝ(k)."""
        self._check_same_dimension(other)
        return complex(
            sum(
                value * other.coeffs[k].conjugate()
                for k, value in self.items()
                if k in other.coeffs
            )
        )

    # ---------------
    # Serialization
    # ---------------
    def to_symbol_dict(self, order: OrderSpec | None = None) -> dict[str, Any]:
        """Symbol file form; terms follow `order` when given, else tuple order."""
        items = self.items() if order is None else self.ordered_items(order)
        return {
            "n": self.n,
            "terms": [
                {"k": list(k), "re": value.real, "im": value.imag}
                for k, value in items
            ],
        }

    @classmethod
    def from_symbol_dict(cls, data: dict[str, Any]) -> TrigPoly:
        """Create instance from the JSON symbol format.

        Raises:
            SymbolParseError: If the data fails schema validation, mixes
                dimensions, repeats an index or holds a non-finite coefficient.
        """
        try:
            jsonschema.validate(instance=data, schema=SYMBOL_FILE)
        except jsonschema.exceptions.ValidationError as exception:
            raise SymbolParseError(
                f"Symbol failed schema validation: {exception.message}"
            ) from exception

        n = data["n"]
        coeffs: dict[CharacterIndex, complex] = {}
        for term in data["terms"]:
            k = tuple(term["k"])
            if len(k) != n:
                raise SymbolParseError(f"Index {list(k)} does not have dimension {n}")
            if k in coeffs:
                raise SymbolParseError(f"Duplicate index {list(k)} in symbol")
            try:
                value = complex(term["re"], term["im"])
            except OverflowError as exception:
                raise SymbolParseError(
                    f"Coefficient at index {list(k)} overflows a float"
                ) from exception
            if not cmath.isfinite(value):
                raise SymbolParseError(f"Non-finite coefficient at index {list(k)}")
            coeffs[k] = value
        return cls(n, coeffs)


def load_symbol(path: str) -> TrigPoly:
    """Read a symbol file (local path or URI) into a polynomial."""
    try:
        with smart_open.open(path, "r", encoding="utf-8") as symbol_file:
            data = json.load(symbol_file)
    except json.JSONDecodeError as exception:
        raise SymbolParseError(
            f"Symbol file '{path}' is not valid JSON: {exception}"
        ) from exception
    except UnicodeDecodeError as exception:
        raise SymbolParseError(
            f"Symbol file '{path}' is not UTF-8 text: {exception}"
        ) from exception
    except OSError as exception:
        raise SymbolParseError(
            f"Cannot read symbol file '{path}': {exception}"
        ) from exception
    poly = TrigPoly.from_symbol_dict(data)
    logger.debug(f"Loaded symbol with {len(poly)} terms from '{path}'")
    return poly


def dump_symbol(poly: TrigPoly, path: str) -> None:
    with smart_open.open(path, "w") as symbol_file:
        json.dump(poly.to_symbol_dict(), symbol_file, indent=2)
