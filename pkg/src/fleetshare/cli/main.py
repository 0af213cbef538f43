"""Command-line interface for fleetshare.

Exit codes: 0 on success, 2 on an infeasible profile, a No offer verdict
or a state that is not an equilibrium, 1 on errors.
"""

import importlib.metadata
import multiprocessing as mp
import sys
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any

import click

__all__ = ["cli"]

try:
    __version__ = importlib.metadata.version("fleetshare")
except importlib.metadata.PackageNotFoundError:
    __version__ = "0.1.0"  # Fallback for development

EXIT_REJECTED = 2


def _fail(exc: Exception, verbose: bool = False) -> None:
    click.secho(f"Error: {exc}", fg="red", err=True)
    if verbose:
        import traceback

        click.echo(traceback.format_exc(), err=True)
    sys.exit(1)


def _echo_rows(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    click.echo(",".join(header))
    for row in rows:
        click.echo(",".join(str(cell) for cell in row))


@click.group()
@click.version_option(version=__version__, prog_name="fleetshare")
def cli() -> None:
    """Individualized travel-time offers for fleets of connected automated vehicles.

    Use 'fleetshare COMMAND --help' for command-specific help.
    """


@cli.command()
@click.option(
    "--routing",
    "routing_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Routing TOML file (flows, times)",
)
@click.option(
    "--profile",
    "profile_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Offer profile CSV file (driver_id,weight,offer)",
)
@click.option(
    "--method",
    type=click.Choice(["greedy", "criterion"]),
    default="greedy",
    help="Decision procedure (default: greedy)",
)
@click.option(
    "--output-dir",
    "-o",
    type=click.Path(file_okay=False),
    default=None,
    help="Also write measure.csv and plan.csv here when feasible",
)
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
def feasible(
    routing_path: str,
    profile_path: str,
    method: str,
    output_dir: str | None,
    verbose: bool,
) -> None:
    """Check whether an offer profile can be realized by a routing.

    Prints TRUE or FALSE; on TRUE the greedy method also prints the
    generating measure as CSV rows (mass, alpha_1..alpha_R).

    Examples
    --------
        fleetshare feasible --routing so.toml --profile offers.csv
        fleetshare feasible --routing so.toml --profile offers.csv -o out
    """
    from fleetshare.api import (
        read_profile,
        read_routing,
        write_plan_csv,
        write_simplex_measure_csv,
    )
    from fleetshare.feasibility import feasible_by_criterion, plan_from_simplex_measure
    from fleetshare.feasibility import feasible as greedy_feasible
    from fleetshare.utils import format_number

    try:
        routing = read_routing(routing_path)
        profile = read_profile(profile_path)
        tau = profile.induced_distribution()
        if verbose:
            click.echo(
                f"Routing: {routing.route_count} routes, fleet {format_number(routing.total_flow)}",
                err=True,
            )
            click.echo(f"Profile: {len(profile)} drivers, method {method}", err=True)

        if method == "criterion":
            verdict = feasible_by_criterion(routing, tau)
            click.echo("TRUE" if verdict else "FALSE")
            if not verdict:
                sys.exit(EXIT_REJECTED)
            return

        result = greedy_feasible(routing, tau)
        click.echo("TRUE" if result.feasible else "FALSE")
        if not result.feasible:
            sys.exit(EXIT_REJECTED)
        header = ["mass", *(f"alpha_{r + 1}" for r in range(routing.route_count))]
        _echo_rows(header, [[format_number(x) for x in row] for row in result.measure.to_rows()])

        if output_dir is not None:
            out = Path(output_dir)
            plan = plan_from_simplex_measure(result.measure, profile, routing)
            write_plan_csv(plan, out / "plan.csv")
            write_simplex_measure_csv(result.measure, out / "measure.csv")
            if verbose:
                click.echo(f"Wrote {out / 'plan.csv'} and {out / 'measure.csv'}", err=True)

    except Exception as e:
        _fail(e, verbose)


@cli.command()
@click.option(
    "--plan",
    "plan_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Assignment plan TOML file",
)
@click.option("--days", "-J", type=click.IntRange(min=1), default=10, help="Days (default: 10)")
@click.option("--seed", type=int, default=None, help="Draw days i.i.d. with this seed")
@click.option(
    "--output",
    "-o",
    type=click.Path(dir_okay=False),
    default=None,
    help="Write the schedule CSV here instead of stdout",
)
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
def schedule(
    plan_path: str,
    days: int,
    seed: int | None,
    output: str | None,
    verbose: bool,
) -> None:
    """Build a day-by-day schedule realizing an assignment plan.

    Rows are drivers, columns are days and values are 1-based route ids.
    Without --seed the days follow the deterministic quota sequence.

    Examples
    --------
        fleetshare schedule --plan plan.toml --days 10
        fleetshare schedule --plan plan.toml --days 10000 --seed 7 -o schedule.csv
    """
    from fleetshare.api import read_plan, write_schedule_csv
    from fleetshare.scheduler import (
        birkhoff_decompose,
        build_schedule,
        expand_to_doubly_stochastic,
        integer_flows,
        sample_schedule,
    )

    try:
        plan = read_plan(plan_path)
        flows = integer_flows(plan.routing.flows)
        if seed is None:
            result = build_schedule(plan, flows, days)
        else:
            decomposition = birkhoff_decompose(expand_to_doubly_stochastic(plan, flows))
            result = sample_schedule(decomposition, flows, days, seed, plan.driver_ids)
        if verbose and result.decomposition is not None:
            click.echo(f"Decomposition terms: {len(result.decomposition.terms)}", err=True)

        if output is None:
            header = ["driver_id", *(f"day_{j + 1}" for j in range(result.day_count))]
            _echo_rows(header, result.to_rows())
        else:
            write_schedule_csv(result, output)
            click.secho(
                f"✓ Wrote {result.day_count}-day schedule for "
                f"{len(result.driver_ids)} drivers to {output}",
                fg="green",
            )

    except Exception as e:
        _fail(e, verbose)


@cli.command()
@click.option(
    "--network",
    "network_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Network TOML file",
)
@click.option(
    "--gamma",
    "gamma_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Discount factor CSV file (driver_id,weight,gamma)",
)
@click.option(
    "--strategy",
    "strategy_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Fleet strategy TOML file",
)
@click.option("--theta-lap", type=float, default=None, help="Late-arrival value of time")
@click.option("--theta-eap", type=float, default=None, help="Early-arrival value of time")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
def market(
    network_path: str,
    gamma_path: str,
    strategy_path: str,
    theta_lap: float | None,
    theta_eap: float | None,
    verbose: bool,
) -> None:
    """Evaluate a fleet strategy for a driver population.

    Prints per-driver utilities as CSV followed by the market share and
    the verdict. Exits with 2 when the state is not an equilibrium or the
    offers are rejected.

    Examples
    --------
        fleetshare market --network net.toml --gamma gamma.csv --strategy so.toml
    """
    from fleetshare.api import read_gamma, read_network, read_strategy
    from fleetshare.engine import (
        NetworkSpec,
        PopulationSpec,
        RunParameters,
        ScenarioConfig,
        run_scenario,
    )
    from fleetshare.utils import format_number

    try:
        network = read_network(network_path)
        gamma = read_gamma(gamma_path)
        config = ScenarioConfig(
            network=NetworkSpec(routes=network.routes, demand=network.demand),
            population=PopulationSpec(
                classes=tuple(gamma), theta_lap=theta_lap, theta_eap=theta_eap
            ),
            strategy=read_strategy(strategy_path),
            run=RunParameters(name=Path(strategy_path).stem, days=1),
            source=strategy_path,
        )
        report = run_scenario(config, raise_errors=True)

        _echo_rows(
            ("driver_id", "gamma", "weight", "mode", "u_cav", "u_hdv"),
            [
                [
                    pair.driver_id,
                    format_number(pair.gamma),
                    format_number(pair.weight),
                    pair.mode.value,
                    format_number(pair.u_cav),
                    format_number(pair.u_hdv),
                ]
                for pair in report.utilities
            ],
        )
        click.echo(f"market_share,{format_number(report.market_share)}")
        if report.verdict is not None:
            click.echo(f"verdict,{report.verdict.kind.value}")
        if report.offer is not None:
            click.echo(f"offer,{report.offer.value}")
        if verbose and report.verdict is not None:
            click.echo(f"Nested verdict: {report.verdict.nested.value}", err=True)
            click.echo(f"Defectors: {', '.join(report.verdict.defectors) or '-'}", err=True)
            click.echo(f"Joiners: {', '.join(report.verdict.joiners) or '-'}", err=True)
        if not report.accepted:
            sys.exit(EXIT_REJECTED)

    except Exception as e:
        _fail(e, verbose)


@cli.command()
@click.option(
    "--dist",
    "dist_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Travel-time distribution (location,weight CSV or TOML atoms)",
)
@click.option("--theta-lap", type=float, required=True, help="Late-arrival value of time")
@click.option("--theta-eap", type=float, required=True, help="Early-arrival value of time")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
def risk(dist_path: str, theta_lap: float, theta_eap: float, verbose: bool) -> None:
    """Optimal departure offset for a travel-time distribution.

    Prints rho, the minimized expected penalty and E[T] plus that risk.

    Examples
    --------
        fleetshare risk --dist mix.csv --theta-lap 2 --theta-eap 1
    """
    from fleetshare.api import read_distribution
    from fleetshare.risk import PenaltySpec, optimal_rho
    from fleetshare.utils import format_number

    try:
        distribution = read_distribution(dist_path)
        penalty = PenaltySpec(theta_lap=theta_lap, theta_eap=theta_eap)
        result = optimal_rho(distribution, penalty)
        if verbose:
            click.echo(f"Critical ratio: {format_number(penalty.critical_ratio)}", err=True)
            low, high = result.interval
            click.echo(
                f"Minimizers: [{format_number(low)}, {format_number(high)}]", err=True
            )
        _echo_rows(
            ("rho", "risk", "total"),
            [[format_number(result.rho), format_number(result.risk), format_number(result.total)]],
        )

    except Exception as e:
        _fail(e, verbose)


def _audit_path(audit_log: str | None, config_path: str, many: bool) -> str | None:
    if audit_log is None or not many:
        return audit_log
    base = Path(audit_log)
    return str(base.with_name(f"{base.stem}-{Path(config_path).stem}{base.suffix}"))


def _run_config(
    config_path: str,
    output_dir: str | None,
    days: int | None,
    seed: int | None,
    audit_log: str | None,
    command: list[str],
) -> dict[str, Any]:
    """Run one scenario file; top level so worker processes can unpickle it."""
    from fleetshare.api import run_scenario_file

    name = Path(config_path).stem
    try:
        report = run_scenario_file(
            config_path,
            output_dir=Path(output_dir) / name if output_dir is not None else None,
            days=days,
            seed=seed,
            audit_log=audit_log,
            command=command,
        )
    except Exception as e:
        return {"config": config_path, "success": False, "error": f"{type(e).__name__}: {e}"}
    verdict = report.verdict.kind.value if report.verdict is not None else None
    return {
        "config": config_path,
        "name": report.scenario,
        "success": report.success,
        "accepted": report.accepted,
        "verdict": verdict,
        "market_share": report.market_share,
        "error": report.error_message,
        "output_files": dict(report.output_files),
    }


@cli.command()
@click.argument("configs", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--output-dir",
    "-o",
    type=click.Path(file_okay=False),
    default="out",
    help="Artifacts go to OUTPUT_DIR/<config stem> (default: out)",
)
@click.option("--seed", type=int, default=None, help="Sample days i.i.d. with this seed")
@click.option("--days", "-J", type=click.IntRange(min=1), default=None, help="Override days")
@click.option(
    "--jobs",
    "-j",
    type=click.IntRange(min=1),
    default=1,
    help="Scenarios run in parallel (default: 1)",
)
@click.option(
    "--audit-log",
    type=click.Path(dir_okay=False),
    default=None,
    help="JSONL audit log; one file per config when several are given",
)
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
def scenario(
    configs: tuple[str, ...],
    output_dir: str,
    seed: int | None,
    days: int | None,
    jobs: int,
    audit_log: str | None,
    verbose: bool,
) -> None:
    """Run scenario CONFIGS end to end and write their CSV reports.

    Each run writes utilities.csv, timeseries.csv, histogram.csv,
    schedule.csv (when drivers can be scheduled) and summary.json.

    Examples
    --------
        fleetshare scenario scenarios/mixed_routing.toml
        fleetshare scenario scenarios/*.toml -o results --jobs 4
        fleetshare scenario scenarios/mixed_routing.toml --seed 7 --audit-log run.jsonl
    """
    from fleetshare.utils import format_number

    command = ["fleetshare", *sys.argv[1:]]
    many = len(configs) > 1
    arguments = [
        (path, output_dir, days, seed, _audit_path(audit_log, path, many), command)
        for path in configs
    ]

    if verbose:
        click.echo(f"Running {len(configs)} scenario(s) with {jobs} job(s)", err=True)

    if jobs > 1 and many:
        with ProcessPoolExecutor(
            max_workers=min(jobs, len(configs)),
            mp_context=mp.get_context("spawn"),
        ) as pool:
            futures = [pool.submit(_run_config, *args) for args in arguments]
            results = [f.result() for f in futures]
    else:
        results = [_run_config(*args) for args in arguments]

    failed = rejected = False
    for result in results:
        if not result["success"]:
            click.secho(f"✗ {result['config']}: {result['error']}", fg="red", err=True)
            failed = True
            continue
        line = (
            f"{result['name']}: verdict {result['verdict']}, "
            f"market share {format_number(result['market_share'])}"
        )
        if result["accepted"]:
            click.secho(f"✓ {line}", fg="green")
        else:
            click.secho(f"• {line}", fg="yellow")
            rejected = True
        if verbose:
            for name, path in result["output_files"].items():
                click.echo(f"  {name}: {path}", err=True)

    if failed:
        sys.exit(1)
    if rejected:
        sys.exit(EXIT_REJECTED)


if __name__ == "__main__":
    cli()
