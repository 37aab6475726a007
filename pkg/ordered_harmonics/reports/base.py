import json
import logging
from abc import ABC, abstractmethod
from datetime import UTC, datetime
from enum import StrEnum
from io import StringIO
from typing import Any

import pandas as pd
import smart_open
from jinja2 import Environment, PackageLoader, Template, select_autoescape

logger = logging.getLogger(__name__)


class OutputFormat(StrEnum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


class Report(ABC):
    """Base class for all ordered-harmonics reports.

    A report renders as a JSON document (full detail, deterministic, no timestamps),
    a CSV of scalar summary rows, or a text summary from a Jinja template.
    """

    def __init__(self) -> None:
        self.report_date = datetime.now(tz=UTC).strftime("%Y%m%dT%H%M%SZ")

        # configure environment for loading jinja templates
        self.jinja_env = Environment(
            loader=PackageLoader("ordered_harmonics", "reports/templates"),
            autoescape=select_autoescape(),
            trim_blocks=True,
            lstrip_blocks=True,
        )

    @property
    @abstractmethod
    def summary_template(self) -> Template:
        """Jinja template for report summary."""

    @property
    @abstractmethod
    def passed(self) -> bool:
        """Whether every identity and inequality in the report held."""

    @abstractmethod
    def to_dict(self) -> dict[str, Any]:
        """Full report content as JSON-serializable data."""

    @abstractmethod
    def summary_rows(self) -> list[dict[str, Any]]:
        """Scalar rows for the CSV export."""

    @abstractmethod
    def generate_summary(self) -> str:
        """Render summary from report template."""

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buffer = StringIO()
        pd.DataFrame(self.summary_rows()).to_csv(buffer, index=False)
        return buffer.getvalue()

    def render(self, output_format: OutputFormat) -> str:
        if output_format == OutputFormat.JSON:
            return self.to_json()
        if output_format == OutputFormat.CSV:
            return self.to_csv()
        return self.generate_summary()

    def write(self, output_location: str, output_format: OutputFormat) -> None:
        """Write the rendered report to a local path or URI."""
        with smart_open.open(output_location, "w") as output_file:
            output_file.write(self.render(output_format))
        logger.info(f"Wrote {output_format} report to: {output_location}")
