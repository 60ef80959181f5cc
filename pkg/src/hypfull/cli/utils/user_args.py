from collections.abc import Callable
from functools import wraps
from typing import Any

import click
from loguru import logger
from pydantic import BaseModel

from hypfull.cli.utils.text import TerminalHandler
from hypfull.core.config.run import AvailableProfile, RunConfig, get_run_config


class UserArgs(BaseModel):
    verbose: bool
    quiet: bool
    profile: AvailableProfile


class RunOverrides(BaseModel):
    """Per-command numeric flags; None keeps the profile value."""

    tol: float | None = None
    jobs: int | None = None
    seed: int | None = None
    no_cache: bool = False

    def apply(self, config: RunConfig) -> RunConfig:
        solver = config.solver.model_copy(
            update={k: v for k, v in {"tolerance": self.tol, "seed": self.seed}.items() if v is not None}
        )
        update: dict[str, Any] = {"solver": solver}
        if self.jobs is not None:
            update["jobs"] = self.jobs
        if self.no_cache:
            update["use_cache"] = False
        return config.model_copy(update=update)


def setup_logging(args: UserArgs) -> None:
    """Route loguru through the rich console at the level chosen by the flags."""
    if args.quiet:
        level = "WARNING"
    elif args.verbose:
        level = "DEBUG"
    else:
        level = "INFO"
    logger.remove()
    logger.add(TerminalHandler.display_loguru_message, level=level, format="{message}")


def load_profile(args: UserArgs) -> RunConfig:
    return get_run_config(args.profile)


def global_options(func: Callable[..., None]) -> Callable[..., None]:
    """Logging and profile options of the command group."""
    func = click.option(
        "--profile",
        "-p",
        type=click.Choice([p.value for p in AvailableProfile]),
        default=AvailableProfile.DEFAULT.value,
        help="Run profile from configs/<profile>.yaml",
    )(func)
    func = click.option("--quiet", "-q", is_flag=True, help="Only show warnings and errors")(func)
    return click.option("--verbose", "-v", is_flag=True, help="Enable verbose logging")(func)


def parse_user_args(*, verbose: bool, quiet: bool, profile: str) -> UserArgs:
    """Converts the global click options into a pydantic object."""
    if verbose and quiet:
        msg = "Cannot use both --verbose and --quiet flags"
        raise click.BadParameter(msg)
    return UserArgs(verbose=verbose, quiet=quiet, profile=AvailableProfile(profile))


def run_options(func: Callable[..., None]) -> Callable[..., None]:
    """Solver and parallelism flags shared by the commands that realize polyhedra."""

    @click.option("--tol", type=float, default=None, help="Gram residual tolerance of the solver")
    @click.option("--jobs", "-j", type=click.IntRange(min=1), default=None, help="Parallel worker processes")
    @click.option("--seed", type=int, default=None, help="Base seed of the solver retries")
    @click.option("--no-cache", is_flag=True, help="Neither read nor write the results cache")
    @wraps(func)
    def wrapper(*args: Any, tol: float | None, jobs: int | None, seed: int | None, no_cache: bool, **kwargs: Any) -> None:  # noqa: FBT001
        func(*args, overrides=RunOverrides(tol=tol, jobs=jobs, seed=seed, no_cache=no_cache), **kwargs)

    return wrapper
