from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING, Any, final

import numpy as np

from ordered_harmonics.bmo import DEFAULT_SLACK, SolverConfig
from ordered_harmonics.exceptions import InvalidCheckNameError, NoMinimalPositiveError
from ordered_harmonics.hankel import DEFAULT_TOL

if TYPE_CHECKING:  # pragma: no cover
    from collections.abc import Iterable, Iterator

    from ordered_harmonics.ordered_group import OrderSpec
    from ordered_harmonics.trigpoly import GridSpec, TrigPoly

logger = logging.getLogger(__name__)

# relative tolerance of coefficient-level identities
IDENTITY_TOLERANCE = 1e-12


class CheckStatus(StrEnum):
    PASSED = "passed"
    FAILED = "failed"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class VerifyContext:
    """Everything a check needs: the order, a seeded corpus and numeric settings."""

    order: OrderSpec
    corpus: list[TrigPoly]
    grid: GridSpec
    tol: float = DEFAULT_TOL
    slack: float = DEFAULT_SLACK
    seed: int = 0
    solver: SolverConfig = field(default_factory=lambda: SolverConfig(iters=200))
    solver_cases: int = 2

    @property
    def label(self) -> str:
        return f"{self.order.kind}-n{self.order.n}"


@dataclass
class CheckResult:
    name: str
    description: str
    status: CheckStatus
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    worst: float = 0.0
    detail: str = ""

    @property
    def failed(self) -> bool:
        return self.status == CheckStatus.FAILED

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "description": self.description,
            "status": str(self.status),
            "cases": self.cases,
            "failures": self.failures,
            "worst": self.worst,
            "detail": self.detail,
        }


class Check(ABC):
    """A base check class from which every identity and inequality check is derived.

    Subclasses set 'check_name' and implement 'verify', reporting each case through
    'record' or 'expect'. Checks that rely on the least positive character set
    'requires_minimal_positive' and are reported as skipped under orders without one.
    """

    check_name: str = "base"
    description: str = ""
    requires_minimal_positive: bool = False

    def __init__(self) -> None:
        self._reset()

    def _reset(self) -> None:
        self.cases = 0
        self.failures: list[str] = []
        self.worst = 0.0

    @classmethod
    def get_check(cls, check_name: str) -> type[Check]:
        """Return check class by name.

        Raises:
            InvalidCheckNameError: If no registered check has the name.
        """
        for check_class in cls._get_subclasses():
            if check_name == check_class.check_name:
                return check_class
        raise InvalidCheckNameError(f"Invalid check name: {check_name}")

    @classmethod
    def all_checks(cls) -> list[type[Check]]:
        return list(cls._get_subclasses())

    @classmethod
    def _get_subclasses(cls) -> Iterator[type[Check]]:
        for subclass in cls.__subclasses__():
            yield from subclass._get_subclasses()  # noqa: SLF001
            yield subclass

    def applies_to(self, context: VerifyContext) -> str | None:  # noqa: ARG002
        """Return a reason when the check does not apply to the context."""
        return None

    @abstractmethod
    def verify(self, context: VerifyContext) -> None:
        """Run every case of the check against the context."""

    @final
    def run(self, context: VerifyContext) -> CheckResult:
        self._reset()
        if reason := self.applies_to(context):
            return self._result(CheckStatus.SKIPPED, reason)
        try:
            if self.requires_minimal_positive:
                context.order.minimal_positive()
            self.verify(context)
        except NoMinimalPositiveError as exception:
            if context.order.has_minimal_positive:
                raise
            return self._result(CheckStatus.SKIPPED, str(exception))
        status = CheckStatus.FAILED if self.failures else CheckStatus.PASSED
        logger.debug(
            f"Check '{self.check_name}' on {context.label}: {status} "
            f"({self.cases} cases, worst={self.worst:.3e})"
        )
        return self._result(status)

    def _result(self, status: CheckStatus, detail: str = "") -> CheckResult:
        return CheckResult(
            name=self.check_name,
            description=self.description,
            status=status,
            cases=self.cases,
            failures=list(self.failures),
            worst=self.worst,
            detail=detail,
        )

    def record(self, label: str, error: float, limit: float) -> None:
        """Count a case whose error must not exceed the limit."""
        self.cases += 1
        self.worst = max(self.worst, error)
        if not error <= limit:
            self.failures.append(f"{label}: error {error:.3e} exceeds {limit:.3e}")

    def expect(self, label: str, *, condition: bool) -> None:
        self.cases += 1
        if not condition:
            self.failures.append(label)


def run_checks(
    context: VerifyContext, names: Iterable[str] | None = None
) -> list[CheckResult]:
    """Run the named checks (all registered checks by default) in registry order."""
    if names is None:
        check_classes = Check.all_checks()
    else:
        check_classes = [Check.get_check(name) for name in names]
    results = [check_class().run(context) for check_class in check_classes]
    failed = sum(result.failed for result in results)
    logger.info(
        f"Ran {len(results)} checks on {context.label}: "
        f"{len(results) - failed} not failed, {failed} failed"
    )
    return results


def coefficient_error(first: TrigPoly, second: TrigPoly) -> float:
    """Largest coefficient difference relative to max(1, largest coefficient)."""
    keys = set(first.coeffs) | set(second.coeffs)
    scale = max(
        1.0,
        max((abs(v) for v in first.coeffs.values()), default=0.0),
        max((abs(v) for v in second.coeffs.values()), default=0.0),
    )
    difference = max(
        (abs(first.coeffs.get(k, 0j) - second.coeffs.get(k, 0j)) for k in keys),
        default=0.0,
    )
    return difference / scale


def matrix_error(first: np.ndarray, second: np.ndarray) -> float:
    """Largest entry difference relative to max(1, largest entry)."""
    if first.size == 0:
        return 0.0
    scale = max(1.0, float(np.max(np.abs(first))), float(np.max(np.abs(second))))
    return float(np.max(np.abs(first - second))) / scale
