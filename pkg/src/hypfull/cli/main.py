from collections.abc import Callable
from functools import wraps
from pathlib import Path
from typing import Any

import click
from loguru import logger
from pydantic import BaseModel

from hypfull.cli.utils.save import save_json, save_lines, save_model
from hypfull.cli.utils.text import TerminalHandler
from hypfull.cli.utils.user_args import RunOverrides, global_options, load_profile, parse_user_args, run_options, setup_logging
from hypfull.core.cache import ResultCache
from hypfull.core.config.run import RunConfig
from hypfull.core.errors import HypfullError, InputError
from hypfull.flows.conjecture import check_conjecture_a, check_conjecture_family
from hypfull.flows.descriptors import (
    emit_descriptors,
    results_table,
    safe_name,
    solve_isomers,
    write_realizations,
    write_scatter,
)
from hypfull.flows.table1 import run_table1
from hypfull.graphcore.loader import load_many
from hypfull.graphcore.model import FullereneGraph
from hypfull.graphcore.planar_code import save_planar_code
from hypfull.graphcore.spiral import canonical_spiral, enumerate_isomers, format_spiral
from hypfull.graphcore.validation import validate_fullerene
from hypfull.indices.vector import compute_indices
from hypfull.realize.solver import realization_to_dict, realize
from hypfull.stats.correlation import pcc_matrix, per_np_slopes, slopes_frame
from hypfull.stats.regression import HV_FEATURES, RE_FEATURES, model_transfer_pcc, ols_fit
from hypfull.stats.stability import stability_criteria_check
from hypfull.stats.table import DescriptorTable, load_external

INTERNAL_EXIT = 3
DEFAULT_PCC_COLUMNS = ("volume", "sphericity", "W", "WW", "W5", "Np", "H5", "H6")


class CliState(BaseModel):
    config: RunConfig


def exit_codes(func: Callable[..., None]) -> Callable[..., None]:
    """Map HypfullError to its exit code and anything unexpected to the internal-error code."""

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        ctx = click.get_current_context()
        try:
            func(*args, **kwargs)
        except (click.ClickException, click.exceptions.Exit, click.Abort):
            raise
        except HypfullError as e:
            logger.debug(f"{type(e).__name__}: exit code {e.exit_code}")
            ctx.exit(e.exit_code)
        except FileNotFoundError as e:
            logger.error(str(e))
            ctx.exit(InputError.exit_code)
        except Exception as e:  # noqa: BLE001
            logger.exception(f"Unexpected error: {e!s}")
            ctx.exit(INTERNAL_EXIT)

    return wrapper


def _config(ctx: click.Context, overrides: RunOverrides | None = None) -> RunConfig:
    config: RunConfig = ctx.obj.config
    return overrides.apply(config) if overrides is not None else config


def _graphs(inputs: tuple[Path, ...], n: int | None) -> list[FullereneGraph]:
    if not inputs and n is None:
        msg = "Give input files with --in or a vertex count with --n"
        raise click.UsageError(msg)
    graphs = load_many(list(inputs)) if inputs else []
    if n is not None:
        graphs.extend(enumerate_isomers(n))
    return graphs


def _fmt(value: float | None, precision: int) -> str:
    return "" if value is None else f"{value:.{precision}f}"


input_option = click.option(
    "--in", "inputs", multiple=True, type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="planar_code or spiral text file (repeatable)",
)
n_option = click.option("--n", "n", type=int, default=None, help="Enumerate all isomers with this many vertices")


@click.group()
@global_options
@click.pass_context
@exit_codes
def main(ctx: click.Context, *, verbose: bool, quiet: bool, profile: str) -> None:
    """Fullerenes as right-angled hyperbolic polyhedra."""
    args = parse_user_args(verbose=verbose, quiet=quiet, profile=profile)
    setup_logging(args)
    ctx.obj = CliState(config=load_profile(args))


@main.command()
@input_option
@click.pass_context
@exit_codes
def validate(ctx: click.Context, inputs: tuple[Path, ...]) -> None:
    """Check that every input graph is a fullerene."""
    graphs = _graphs(inputs, None)
    reports = [validate_fullerene(g) for g in graphs]
    TerminalHandler.display_table(
        "Validation",
        ["id", "N", "passed", "failures"],
        [[g.graph_id, g.n_vertices, r.passed, "; ".join(f.name for f in r.failures)] for g, r in zip(graphs, reports, strict=True)],
    )
    failed = sum(not r.passed for r in reports)
    if failed:
        msg = f"{failed} of {len(reports)} graphs are not fullerenes"
        logger.error(msg)
        ctx.exit(InputError.exit_code)
    logger.success(f"All {len(reports)} graphs are fullerenes")


@main.command()
@click.option("--n", "n", type=int, required=True, help="Number of vertices")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Output file")
@click.option("--format", "fmt", type=click.Choice(["planar", "spiral"]), default="planar")
@click.option("--limit", type=click.IntRange(min=1), default=None, help="Stop after this many isomers")
@exit_codes
def gen(n: int, out: Path | None, fmt: str, limit: int | None) -> None:
    """Enumerate the isomers of C_n, one per isomorphism class."""
    graphs = enumerate_isomers(n, limit)
    spirals = [canonical_spiral(g) for g in graphs]
    lines = [format_spiral(code) for code in spirals if code is not None]
    if out is None:
        for line in lines:
            TerminalHandler.display_message(line)
    elif fmt == "planar":
        save_planar_code(out, graphs)
    else:
        save_lines(out, lines)
    logger.success(f"C{n}: {len(graphs)} isomers" + (f" written to {out}" if out else ""))


@main.command()
@input_option
@n_option
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="CSV output")
@exit_codes
def indices(inputs: tuple[Path, ...], n: int | None, out: Path | None) -> None:
    """Topological indices (W, WW, W5, Np, H5, H6, signatures) of each graph."""
    vectors = [compute_indices(g) for g in _graphs(inputs, n)]
    table = DescriptorTable.from_rows([{"id": v.graph_id, "N": v.n_vertices, **v.as_row()} for v in vectors])
    if out is not None:
        table.to_csv(out)
        logger.success(f"Wrote {len(table)} rows to {out}")
    TerminalHandler.display_table(
        "Indices",
        ["id", "W", "WW", "W5", "Np", "H5", "H6"],
        [[v.graph_id, v.W, str(v.WW), str(v.W5), v.Np, v.H5, v.H6] for v in vectors],
    )


@main.command(name="realize")
@input_option
@n_option
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), required=True, help="Output directory")
@run_options
@click.pass_context
@exit_codes
def realize_command(ctx: click.Context, inputs: tuple[Path, ...], n: int | None, out: Path, overrides: RunOverrides) -> None:
    """Right-angled realization of each graph, one JSON document per graph."""
    config = _config(ctx, overrides)
    for g in _graphs(inputs, n):
        r = realize(g, config.solver)
        save_json(out / f"{safe_name(g.graph_id)}.json", realization_to_dict(r))
        logger.info(f"Graph '{g.graph_id}': residual {r.residual:.2e} after {r.attempts} attempt(s)")


@main.command()
@input_option
@n_option
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Descriptor CSV output")
@click.option("--artifacts", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Directory for realization JSON and scatter CSV files")
@run_options
@click.pass_context
@exit_codes
def volume(
    ctx: click.Context,
    inputs: tuple[Path, ...],
    n: int | None,
    out: Path | None,
    artifacts: Path | None,
    overrides: RunOverrides,
) -> None:
    """Hyperbolic volume, sphericity, bounds and indices of each graph."""
    config = _config(ctx, overrides)
    cache = ResultCache(enabled=config.use_cache)
    table, _ = emit_descriptors(_graphs(inputs, n), artifacts, config, cache)
    if out is not None:
        table.to_csv(out)
        logger.success(f"Wrote {len(table)} rows to {out}")
    frame = table.frame
    TerminalHandler.display_table(
        "Volumes",
        ["id", "volume", "sphericity", "lower", "upper (Atkinson)"],
        [
            [index, _fmt(row["volume"], config.precision), _fmt(row["sphericity"], config.precision),
             _fmt(row["lower_bound"], config.precision), _fmt(row["upper_bound_atkinson"], config.precision)]
            for index, row in frame.iterrows()
        ],
    )
    logger.info(f"Cache: {cache.stats.hits} hits, {cache.stats.misses} misses, {cache.stats.solver_runs} solver runs")


@main.command()
@click.option("--n-min", type=int, default=None, help="Smallest vertex count (profile default)")
@click.option("--n-max", type=int, default=None, help="Largest vertex count (profile default)")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="CSV output")
@run_options
@click.pass_context
@exit_codes
def table1(ctx: click.Context, n_min: int | None, n_max: int | None, out: Path | None, overrides: RunOverrides) -> None:
    """Isomer counts and minimal / maximal volumes per vertex count."""
    config = _config(ctx, overrides)
    rows = run_table1(n_min or config.n_min, n_max or config.n_max, config)
    formatted = [row.formatted(config.precision) for row in rows]
    TerminalHandler.display_table(
        "Minimal and maximal hyperbolic volumes", ["N", "isomers", "distinct", "min", "max"],
        [list(row.values()) for row in formatted],
    )
    if out is not None:
        table = DescriptorTable.from_rows([{"id": f"C{row.N}", **row.model_dump()} for row in rows])
        table.to_csv(out)


@main.command()
@click.option("--desc", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--external", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="PCC matrix CSV")
@click.option("--n", "n", type=int, default=None, help="Restrict to isomers with this many vertices")
@click.option("--columns", default=",".join(DEFAULT_PCC_COLUMNS), show_default=True)
@exit_codes
def correlate(desc: Path, external: Path | None, out: Path | None, n: int | None, columns: str) -> None:
    """PCC matrix of descriptors; with energies also the per-Np slopes and the stability criteria."""
    table = DescriptorTable.read_csv(desc)
    if external is not None:
        table = load_external(table, external)
    if n is not None:
        table = table.for_n(n)
    selected = [c.strip() for c in columns.split(",") if c.strip()]
    if "relative_energy" in table.frame.columns and "relative_energy" not in selected:
        selected.append("relative_energy")
    matrix = pcc_matrix(table, selected)
    TerminalHandler.display_table(
        "PCC", ["", *matrix.columns], [[i, *(f"{v:.6f}" for v in row)] for i, row in matrix.iterrows()]
    )
    if out is not None:
        matrix.to_csv(out, lineterminator="\n")

    if "relative_energy" in table.frame.columns:
        slopes = slopes_frame(per_np_slopes(table))
        if out is not None:
            slopes.to_csv(out.with_name(f"{out.stem}_np_slopes.csv"), index=False, lineterminator="\n")
        report = stability_criteria_check(table)
        TerminalHandler.display_mapping(
            "Stability criteria for volume",
            {
                "PCC(volume, energy)": f"{report.pcc:.6f}",
                "extremes": f"{report.extremes.verdict}: {report.extremes.detail}",
                "|PCC| > 0.6": report.correlation.verdict,
                "Np slopes": f"{report.np_slopes.verdict}: {report.np_slopes.detail}",
            },
        )


@main.command()
@click.option("--desc", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--external", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--model", "model_name", type=click.Choice(["hv", "re"]), default="hv", show_default=True)
@click.option("--n", "n", type=int, default=None, help="Fit on isomers with this many vertices")
@click.option("--transfer-n", type=int, default=None, help="Apply the fitted model to this vertex count")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Regression JSON")
@exit_codes
def regress(
    desc: Path, external: Path | None, model_name: str, n: int | None, transfer_n: int | None, out: Path | None
) -> None:
    """Least-squares model of volume (hv) or relative energy (re) from the indices."""
    table = DescriptorTable.read_csv(desc)
    if external is not None:
        table = load_external(table, external)
    fit_table = table.for_n(n) if n is not None else table
    model = ols_fit(fit_table, *(("volume", HV_FEATURES) if model_name == "hv" else ("relative_energy", RE_FEATURES)))
    result: dict[str, Any] = {"model": model.model_dump()}
    if transfer_n is not None:
        result["transfer"] = {"N": transfer_n, "pcc": model_transfer_pcc(model, table.for_n(transfer_n))}
    TerminalHandler.display_mapping(
        f"{model.target} regression",
        {"intercept": model.intercept, **model.coefficients, "R^2": model.r_squared, "rows": model.n_rows},
    )
    if out is not None:
        save_json(out, result)


@main.command()
@click.option("--n", "n", type=int, required=True, help="Number of vertices")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Report JSON")
@click.option("--artifacts", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Directory for the minimizer's realization and the scatter data")
@run_options
@click.pass_context
@exit_codes
def conjecture(ctx: click.Context, n: int, out: Path | None, artifacts: Path | None, overrides: RunOverrides) -> None:
    """Which isomer of C_n has minimal volume, checked against the nanotube prediction for N = 10k."""
    config = _config(ctx, overrides)
    cache = ResultCache(enabled=config.use_cache)
    report = check_conjecture_a(n, config, cache) if n % 10 == 0 and n != 20 else check_conjecture_family(n, config, cache)  # noqa: PLR2004
    TerminalHandler.display_mapping(f"Minimal volume of C{n}", report.model_dump())
    if out is not None:
        save_model(out, report)
    if artifacts is not None:
        results = solve_isomers(enumerate_isomers(n), config, cache)
        write_scatter(results_table(results), artifacts / "scatter")
        write_realizations([r for r in results if r.source_id == report.min_volume_id], artifacts / "realizations")
    if report.verdict is False:
        logger.warning(f"C{n}: the minimal-volume isomer is not the predicted nanotube")


if __name__ == "__main__":
    main()
