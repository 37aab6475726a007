"""Reports emitted by the ordered-harmonics commands.

Every report renders three ways:

- **json**: the full content, including decomposition witnesses. Keys are sorted and
  no timestamp is included, so identical settings and seed give identical bytes.
- **csv**: scalar summary rows only, one per check, quantity or inequality.
- **text**: a human-readable summary rendered from a Jinja template in
  `reports/templates`, stamped with the run date.

`Report.write()` sends any rendering to a local path or URI through smart_open.
"""

from ordered_harmonics.reports.base import OutputFormat, Report
from ordered_harmonics.reports.norms import BmoSandwichReport, HankelNormReport
from ordered_harmonics.reports.verify import DemoReport, VerifyReport

__all__ = [
    "BmoSandwichReport",
    "DemoReport",
    "HankelNormReport",
    "OutputFormat",
    "Report",
    "VerifyReport",
]
