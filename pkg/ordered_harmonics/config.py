import json
import logging
import os
from collections.abc import Iterable

import sentry_sdk

THREADS_ENV_VAR = "ORDERED_HARMONICS_THREADS"


class Config:
    """Process settings read from the environment.

    Nothing is required: every variable has a default suited to a local run. Numeric
    settings of a command live in 'RunConfig' instead.
    """

    ENV_VARS: Iterable[str] = [
        "WORKSPACE",
        "SENTRY_DSN",
        "WARNING_ONLY_LOGGERS",
        THREADS_ENV_VAR,
    ]

    @property
    def workspace(self) -> str:
        return os.getenv("WORKSPACE", "dev")

    @property
    def sentry_dsn(self) -> str | None:
        dsn = os.getenv("SENTRY_DSN")
        if dsn is None or dsn.lower() == "none":
            return None
        return dsn

    @property
    def warning_only_loggers(self) -> list[str]:
        if names := os.getenv("WARNING_ONLY_LOGGERS"):
            return [name.strip() for name in names.split(",") if name.strip()]
        return []

    @property
    def threads(self) -> int:
        """Upper bound on worker threads used for grid evaluation.

        Read on every access so a changed environment takes effect without a restart.
        """
        value = os.getenv(THREADS_ENV_VAR, "1")
        try:
            threads = int(value)
        except ValueError as exception:
            raise OSError(
                f"Env var '{THREADS_ENV_VAR}' must be an integer, got '{value}'"
            ) from exception
        if threads < 1:
            raise OSError(f"Env var '{THREADS_ENV_VAR}' must be positive, got {threads}")
        return threads

    def validate_env_vars(self) -> None:
        """Raise OSError early if a set env var cannot be used."""
        blank = [name for name in self.ENV_VARS if os.getenv(name, "x").strip() == ""]
        if blank:
            raise OSError(f"Env vars set but empty: {', '.join(blank)}")
        _ = self.threads

    def configure_logger(
        self,
        root_logger: logging.Logger,
        *,
        verbose: bool = False,
    ) -> str:
        """Configure the root logger and route Python warnings through it.

        numpy reports overflow and invalid values as RuntimeWarnings; capturing them
        puts them in the same stream as solver and check progress. Loggers named in
        WARNING_ONLY_LOGGERS stay at WARNING even with verbose=True.
        """
        if verbose:
            root_logger.setLevel(logging.DEBUG)
            log_format = (
                "%(asctime)s %(levelname)s %(name)s.%(funcName)s() [%(threadName)s] "
                "line %(lineno)d: %(message)s"
            )
        else:
            root_logger.setLevel(logging.INFO)
            log_format = "%(asctime)s %(levelname)s %(name)s: %(message)s"

        for name in self.warning_only_loggers:
            logging.getLogger(name).setLevel(logging.WARNING)
        logging.captureWarnings(capture=True)

        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(log_format))
        root_logger.addHandler(handler)

        return (
            f"Logger '{root_logger.name}' configured with level="
            f"{logging.getLevelName(root_logger.getEffectiveLevel())}"
        )

    def configure_sentry(self) -> str:
        if dsn := self.sentry_dsn:
            sentry_sdk.init(dsn, environment=self.workspace)
            sentry_sdk.set_tag("threads", self.threads)
            return (
                "Sentry DSN found, exceptions will be sent to Sentry with "
                f"env={self.workspace}"
            )
        return "No Sentry DSN found, exceptions will not be sent to Sentry"


def load_external_config(file_path: str) -> dict:
    """Load a JSON run config file into a dict; keys are validated by 'RunConfig'."""
    with open(file_path, "rb") as config_file:
        return json.load(config_file)
