"""Verification suite of constructive identities and norm inequalities.

Importing this package registers every check. Checks run in the order their classes
are defined, module by module in import order.
"""

from ordered_harmonics.checks import bmo, hankel, transforms  # noqa: F401
from ordered_harmonics.checks.base import (
    Check,
    CheckResult,
    CheckStatus,
    VerifyContext,
    run_checks,
)

__all__ = ["Check", "CheckResult", "CheckStatus", "VerifyContext", "run_checks"]
