from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import jsonschema
import jsonschema.exceptions

from ordered_harmonics.bmo import DEFAULT_SLACK
from ordered_harmonics.exceptions import InvalidOrderSpecError, InvalidRunConfigError
from ordered_harmonics.hankel import (
    DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
    MAX_MATRIX_DIMENSION,
    TruncationBoxes,
)
from ordered_harmonics.ordered_group import OrderKind, OrderSpec
from ordered_harmonics.reports.base import OutputFormat
from ordered_harmonics.trigpoly import GridSpec
from ordered_harmonics.utils.validate.schemas import RUN_CONFIG

if TYPE_CHECKING:  # pragma: no cover
    from ordered_harmonics.trigpoly import TrigPoly

logger = logging.getLogger(__name__)

DEFAULT_CORPUS_SIZE = 100
DEFAULT_VERIFY_DIMENSIONS = (1, 2)

# flag names that set a field of the nested order object
ORDER_FLAGS = {"order_kind": "kind", "n": "n", "alpha": "alpha"}


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by every command.

    Built from an optional JSON config file and command-line flags; flags win. A
    missing 'n' means "take it from the symbol file" for norm commands and "n = 1
    and n = 2" for verification.
    """

    order_kind: OrderKind = OrderKind.LEX
    n: int | None = None
    alpha: tuple[float, ...] | None = None
    grid: int | None = None
    box: int | None = None
    tol: float = DEFAULT_TOL
    iters: int = DEFAULT_MAX_ITERS
    solver_iters: int | None = None
    slack: float = DEFAULT_SLACK
    seed: int = 0
    corpus_size: int = DEFAULT_CORPUS_SIZE
    output: str | None = None
    output_format: OutputFormat = OutputFormat.TEXT

    @classmethod
    def from_sources(
        cls, file_config: dict[str, Any] | None = None, **flags: Any  # noqa: ANN401
    ) -> RunConfig:
        """Merge config file values and flags, then validate.

        Flags with a value of None are treated as not passed.

        Raises:
            InvalidRunConfigError: If the merged settings fail schema validation or
                describe an impossible order or truncation.
        """
        data = dict(file_config or {})
        order = dict(data.get("order", {}))
        for flag, value in flags.items():
            if value is None:
                continue
            if flag in ORDER_FLAGS:
                order[ORDER_FLAGS[flag]] = list(value) if flag == "alpha" else value
            elif flag == "output_format":
                data["format"] = value
            else:
                data[flag] = value
        if order:
            order.setdefault("kind", str(OrderKind.LEX))
            data["order"] = order

        try:
            jsonschema.validate(instance=data, schema=RUN_CONFIG)
        except jsonschema.exceptions.ValidationError as exception:
            raise InvalidRunConfigError(
                f"Run config failed schema validation: {exception.message}"
            ) from exception

        alpha = order.get("alpha")
        if alpha is not None and order.get("kind") != OrderKind.FUNCTIONAL:
            raise InvalidRunConfigError(
                "'alpha' applies only to the functional order; "
                "pass '--order functional' or drop it"
            )
        run_config = cls(
            order_kind=OrderKind(order.get("kind", OrderKind.LEX)),
            n=order.get("n"),
            alpha=tuple(float(a) for a in alpha) if alpha is not None else None,
            grid=data.get("grid"),
            box=data.get("box"),
            tol=data.get("tol", DEFAULT_TOL),
            iters=data.get("iters", DEFAULT_MAX_ITERS),
            solver_iters=data.get("solver_iters"),
            slack=data.get("slack", DEFAULT_SLACK),
            seed=data.get("seed", 0),
            corpus_size=data.get("corpus_size", DEFAULT_CORPUS_SIZE),
            output=data.get("output"),
            output_format=OutputFormat(data.get("format", OutputFormat.TEXT)),
        )
        if run_config.n is not None or run_config.order_kind == OrderKind.FUNCTIONAL:
            for verify_order in run_config.verify_orders():
                run_config.check_box(verify_order.n)
        logger.debug(f"Run config: {run_config.to_dict()}")
        return run_config

    def order_for(self, n: int) -> OrderSpec:
        """Order on ℤⁿ for a symbol of dimension n.

        Raises:
            InvalidRunConfigError: If the configured order has another dimension or
                is not a valid order.
        """
        configured = self.n if self.alpha is None else len(self.alpha)
        if configured is not None and configured != n:
            raise InvalidRunConfigError(
                f"Order has dimension {configured} but the symbol has dimension {n}"
            )
        try:
            if self.order_kind == OrderKind.FUNCTIONAL:
                if self.alpha is None:
                    raise InvalidOrderSpecError("Functional order needs '--alpha'")
                return OrderSpec.functional(self.alpha)
            return OrderSpec.lex(n)
        except InvalidOrderSpecError as exception:
            raise InvalidRunConfigError(str(exception)) from exception

    def verify_orders(self) -> list[OrderSpec]:
        if self.alpha is not None or self.order_kind == OrderKind.FUNCTIONAL:
            n = len(self.alpha) if self.alpha is not None else self.n or 0
            return [self.order_for(n)]
        if self.n is not None:
            return [self.order_for(self.n)]
        return [self.order_for(n) for n in DEFAULT_VERIFY_DIMENSIONS]

    def check_box(self, n: int) -> None:
        """Raise InvalidRunConfigError if the box radius gives too large a matrix."""
        if self.box is None:
            return
        cone_size = ((2 * self.box + 1) ** n - 1) // 2
        if cone_size > MAX_MATRIX_DIMENSION:
            raise InvalidRunConfigError(
                f"Box radius {self.box} in dimension {n} gives a {cone_size}x"
                f"{cone_size} truncation, over the limit {MAX_MATRIX_DIMENSION}"
            )

    def grid_for(self, n: int) -> GridSpec:
        if self.grid is None:
            return GridSpec.default(n)
        return GridSpec(self.grid, n)

    def boxes_for(self, order: OrderSpec, phi: TrigPoly) -> TruncationBoxes:
        self.check_box(order.n)
        return TruncationBoxes.for_symbol(order, phi, radius=self.box)

    def to_dict(self) -> dict[str, Any]:
        return {
            "order": {
                "kind": str(self.order_kind),
                "n": self.n,
                "alpha": list(self.alpha) if self.alpha is not None else None,
            },
            "grid": self.grid,
            "box": self.box,
            "tol": self.tol,
            "iters": self.iters,
            "solver_iters": self.solver_iters,
            "slack": self.slack,
            "seed": self.seed,
            "corpus_size": self.corpus_size,
            "format": str(self.output_format),
        }
