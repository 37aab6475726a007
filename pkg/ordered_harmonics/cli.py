import datetime
import json
import logging
from collections.abc import Callable
from time import perf_counter
from typing import Any

import click

from ordered_harmonics.bmo import SolverConfig, sandwich_verify
from ordered_harmonics.checks import Check, VerifyContext, run_checks
from ordered_harmonics.config import Config, load_external_config
from ordered_harmonics.corpus import symbol_corpus
from ordered_harmonics.exceptions import (
    InvalidCheckNameError,
    InvalidRunConfigError,
    NoConvergenceError,
    NoMinimalPositiveError,
    SymbolParseError,
)
from ordered_harmonics.hankel import TruncationBoxes
from ordered_harmonics.ordered_group import OrderSpec
from ordered_harmonics.reports import (
    BmoSandwichReport,
    DemoReport,
    HankelNormReport,
    OutputFormat,
    Report,
    VerifyReport,
)
from ordered_harmonics.run_config import RunConfig
from ordered_harmonics.trigpoly import TrigPoly, load_symbol
from ordered_harmonics.worked_examples import worked_examples

logger = logging.getLogger(__name__)
CONFIG = Config()


def _parse_alpha(
    _ctx: click.Context, _param: click.Parameter, value: str | None
) -> tuple[float, ...] | None:
    if value is None:
        return None
    try:
        return tuple(float(a) for a in value.split(","))
    except ValueError as exception:
        raise click.BadParameter(
            f"expected comma-separated numbers, got '{value}'"
        ) from exception


def order_options(func: Callable) -> Callable:
    """Options selecting the order and the numeric settings shared by every run."""
    options = [
        click.option(
            "--order",
            "order_kind",
            type=click.Choice(["lex", "functional"]),
            help="Order on Z^n: lexicographic, or by an irrational linear functional",
        ),
        click.option(
            "--alpha",
            callback=_parse_alpha,
            help="Comma-separated functional coefficients for '--order functional'",
        ),
        click.option("--n", "n", type=int, help="Dimension of the torus"),
        click.option(
            "--grid", type=int, help="Grid points per dimension for sup-norm estimates"
        ),
        click.option("--tol", type=float, help="Relative tolerance of power iteration"),
        click.option("--slack", type=float, help="Relative slack for inequalities"),
        click.option(
            "--solver-iters",
            type=int,
            help="Subgradient solver iterations, 0 to skip the optimizer",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return output_options(func)


def norm_options(func: Callable) -> Callable:
    options = [
        click.option(
            "--box",
            type=int,
            help="Radius of the truncation box (default: symbol degree)",
        ),
        click.option("--iters", type=int, help="Power iteration limit"),
    ]
    for option in reversed(options):
        func = option(func)
    return order_options(func)


def output_options(func: Callable) -> Callable:
    options = [
        click.option(
            "--json",
            "output",
            help="Also write the JSON report to this local path or URI",
        ),
        click.option(
            "--format",
            "output_format",
            type=click.Choice([str(fmt) for fmt in OutputFormat]),
            help="Format printed to stdout (default: text)",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@click.group()
@click.pass_context
@click.option(
    "-c",
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False),
    help="JSON config file; command-line flags override its values",
)
@click.option(
    "-v", "--verbose", is_flag=True, help="Pass to log at debug level instead of info"
)
def main(
    ctx: click.Context,
    config_file: str | None,
    verbose: bool,  # noqa: FBT001
) -> None:
    """Harmonic analysis on the torus with an ordered dual group."""
    ctx.ensure_object(dict)
    ctx.obj["start_time"] = perf_counter()

    root_logger = logging.getLogger()
    logger.info(CONFIG.configure_logger(root_logger, verbose=verbose))
    logger.info(CONFIG.configure_sentry())
    CONFIG.validate_env_vars()

    file_config: dict = {}
    if config_file:
        try:
            file_config = load_external_config(config_file)
        except json.JSONDecodeError as exception:
            raise click.BadParameter(
                f"not valid JSON: {exception}", param_hint="'--config'"
            ) from exception
    ctx.obj["file_config"] = file_config

    logger.info("Running process")


@main.result_callback()
@click.pass_context
def post_main_group_subcommand(
    ctx: click.Context,
    *_args: tuple,
    **_kwargs: dict,
) -> None:
    """Callback for any work to perform after a main sub-command completes."""
    logger.info("Application exiting")
    logger.info(
        "Total time elapsed: %s",
        str(
            datetime.timedelta(seconds=perf_counter() - ctx.obj["start_time"]),
        ),
    )


def build_run_config(ctx: click.Context, **flags: Any) -> RunConfig:  # noqa: ANN401
    try:
        return RunConfig.from_sources(ctx.obj["file_config"], **flags)
    except InvalidRunConfigError as exception:
        raise click.UsageError(str(exception)) from exception


def read_symbol(symbol: str) -> TrigPoly:
    try:
        return load_symbol(symbol)
    except SymbolParseError as exception:
        raise click.BadParameter(str(exception), param_hint="'SYMBOL'") from exception


def emit(ctx: click.Context, report: Report, run_config: RunConfig) -> None:
    """Print the report, write the JSON copy if requested, and set the exit code."""
    click.echo(report.render(run_config.output_format), nl=False)
    if run_config.output:
        report.write(run_config.output, OutputFormat.JSON)
    if not report.passed:
        logger.error("One or more identities or inequalities failed")
        ctx.exit(1)


def solver_config(run_config: RunConfig) -> SolverConfig | None:
    if run_config.solver_iters is None:
        return SolverConfig()
    if run_config.solver_iters == 0:
        return None
    return SolverConfig(iters=run_config.solver_iters)


@main.command()
@click.pass_context
@order_options
@click.option("--seed", type=int, help="Seed of the random symbol corpus")
@click.option("--corpus-size", type=int, help="Random symbols per dimension")
@click.option(
    "--check",
    "check_names",
    multiple=True,
    help="Run only the named check; repeat for several (default: all checks)",
)
def verify(
    ctx: click.Context,
    check_names: tuple[str, ...],
    **flags: Any,  # noqa: ANN401
) -> None:
    """Run the identity and inequality suite on seeded random corpora.

    Without '--n' the suite runs for n = 1 and n = 2 under the lexicographic order.
    Checks that need a least positive character are reported as skipped under a
    functional order.
    """
    run_config = build_run_config(ctx, **flags)
    try:
        for name in check_names:
            Check.get_check(name)
    except InvalidCheckNameError as exception:
        raise click.BadParameter(str(exception), param_hint="'--check'") from exception

    results = {}
    for order in run_config.verify_orders():
        context_kwargs: dict[str, Any] = {}
        if run_config.solver_iters is not None:
            context_kwargs["solver"] = SolverConfig(iters=run_config.solver_iters)
        context = VerifyContext(
            order=order,
            corpus=symbol_corpus(run_config.seed, order.n, run_config.corpus_size),
            grid=run_config.grid_for(order.n),
            tol=run_config.tol,
            slack=run_config.slack,
            seed=run_config.seed,
            **context_kwargs,
        )
        logger.info(f"Verifying {context.label} on {len(context.corpus)} symbols")
        results[context.label] = run_checks(context, names=check_names or None)

    emit(ctx, VerifyReport(results, run_config.to_dict()), run_config)


@main.command(name="hankel-norm")
@click.pass_context
@norm_options
@click.option(
    "--gamma",
    "gamma_form",
    is_flag=True,
    help="Also compute the norm of the matrix realization on the positive cone",
)
@click.argument("symbol")
def hankel_norm(
    ctx: click.Context,
    symbol: str,
    *,
    gamma_form: bool,
    **flags: Any,  # noqa: ANN401
) -> None:
    """Truncated Hankel norms of the symbol in SYMBOL (local path or URI)."""
    run_config = build_run_config(ctx, **flags)
    phi = read_symbol(symbol)
    order = order_for_symbol(run_config, phi)
    boxes = boxes_for_symbol(run_config, order, phi)
    try:
        report = HankelNormReport.compute(
            order,
            phi,
            run_config.grid_for(phi.n),
            boxes=boxes,
            tol=run_config.tol,
            max_iters=run_config.iters,
            slack=run_config.slack,
            gamma_form=gamma_form,
        )
    except NoMinimalPositiveError as exception:
        raise click.UsageError(f"'--gamma' is unavailable: {exception}") from exception
    except NoConvergenceError as exception:
        logger.error(str(exception))  # noqa: TRY400
        ctx.exit(1)
    emit(ctx, report, run_config)


@main.command()
@click.pass_context
@norm_options
@click.argument("symbol")
def bmo(ctx: click.Context, symbol: str, **flags: Any) -> None:  # noqa: ANN401
    """Sandwich the BMO norms of the symbol in SYMBOL between certified bounds."""
    run_config = build_run_config(ctx, **flags)
    phi = read_symbol(symbol)
    order = order_for_symbol(run_config, phi)
    boxes = boxes_for_symbol(run_config, order, phi)
    try:
        bmo_report = sandwich_verify(
            order,
            phi,
            run_config.grid_for(phi.n),
            boxes=boxes,
            solver=solver_config(run_config),
            slack=run_config.slack,
            tol=run_config.tol,
            max_iters=run_config.iters,
        )
    except NoMinimalPositiveError as exception:
        raise click.UsageError(str(exception)) from exception
    except NoConvergenceError as exception:
        logger.error(str(exception))  # noqa: TRY400
        ctx.exit(1)
    emit(ctx, BmoSandwichReport(bmo_report), run_config)


@main.command()
@click.pass_context
@output_options
def demo(ctx: click.Context, **flags: Any) -> None:  # noqa: ANN401
    """Print the worked n = 1 examples with expected and computed values."""
    run_config = build_run_config(ctx, **flags)
    emit(ctx, DemoReport(worked_examples()), run_config)


def order_for_symbol(run_config: RunConfig, phi: TrigPoly) -> OrderSpec:
    try:
        return run_config.order_for(phi.n)
    except InvalidRunConfigError as exception:
        raise click.UsageError(str(exception)) from exception


def boxes_for_symbol(
    run_config: RunConfig, order: OrderSpec, phi: TrigPoly
) -> TruncationBoxes:
    try:
        return run_config.boxes_for(order, phi)
    except InvalidRunConfigError as exception:
        raise click.UsageError(str(exception)) from exception
