"""
Potts Tree - CLI Module

Command-line interface to the exact ground-state engine for the four-state
Potts model with competing interactions on the Cayley tree. Subcommands:

    classes        orbit classes of ball configurations
    ground-states  ground states and periodic witnesses at one coupling
    regions        exact phase fan (JSON) or a plot-ready grid (CSV)
    extend         periodic continuation of one ball configuration
    verify         all verification suites
    peierls        Peierls condition on random or given perturbations

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from classes import SizeGuardError, all_orbits, enumerate_ball_configs
from file_handler import (ball_config_from_dict, load_finite_configuration,
                          write_grid_csv, write_json)
from ground import (RegionFan, ground_state_set, grid_labels, orbit_ids, region_fan,
                    slope_text, extend_periodic, verify_extension)
from model import Coupling, all_signatures, energy_coefficients
from peierls import DEFAULT_DEPTH, DEFAULT_FLIPS, peierls_check, peierls_suite
from utils import parse_fraction, parse_spin_list, setup_logging
from verification import run_all

logger = logging.getLogger(__name__)

COMMANDS = ('classes', 'ground-states', 'regions', 'extend', 'verify', 'peierls')
FRACTION_OPTIONS = ('--j1', '--j2', '--range')


@dataclass(frozen=True)
class RunConfig:
    """Validated settings for one run of the command-line interface."""
    command: str
    k: int = 2
    j1: Optional[Fraction] = None
    j2: Optional[Fraction] = None
    out: Optional[str] = None
    seed: int = 42
    grid: Optional[int] = None
    extent: Fraction = Fraction(2)
    trials: int = 500
    flips: int = DEFAULT_FLIPS
    depth: int = DEFAULT_DEPTH
    list_classes: bool = False
    center: Optional[int] = None
    leaves: Optional[tuple] = None
    config: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command '{self.command}'")
        if self.k < 1:
            raise ValueError(f"--k must be >= 1, got {self.k}")
        if self.grid is not None and (self.grid < 3 or self.grid % 2 == 0):
            raise ValueError(f"--grid must be odd and >= 3, got {self.grid}")
        if self.extent <= 0:
            raise ValueError(f"--range must be positive, got {self.extent}")
        if (self.j1 is None) != (self.j2 is None):
            raise ValueError("--j1 and --j2 must be given together")
        if self.trials < 1 or self.flips < 1 or self.depth < 0:
            raise ValueError("--trials and --flips must be >= 1 and --depth >= 0")

    @property
    def coupling(self) -> Optional[Coupling]:
        return None if self.j1 is None else Coupling(self.j1, self.j2)


def build_parser() -> argparse.ArgumentParser:
    """
    Build the argument parser with one subparser per command.

    Returns:
        argparse.ArgumentParser: The parser
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--k', type=int, default=2, help='Order of the Cayley tree (default: 2)')
    common.add_argument('--out', type=str, help='Output file (default: stdout)')
    common.add_argument('--seed', type=int, default=42, help='Seed for randomized checks')
    common.add_argument('--quiet', action='store_true', help='Only log warnings and errors')
    common.add_argument('--log-level', type=str, choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        default='INFO', help='Set the logging level')
    common.add_argument('--no-log-file', action='store_true', help='Do not write a log file under logs/')

    coupling = argparse.ArgumentParser(add_help=False)
    coupling.add_argument('--j1', type=parse_fraction, help='Nearest-neighbor coupling, exact (e.g. -3/2)')
    coupling.add_argument('--j2', type=parse_fraction, help='Next-nearest-neighbor coupling, exact')

    parser = argparse.ArgumentParser(
        description='Exact ground states of the 4-state Potts model with competing interactions on the Cayley tree.')
    subparsers = parser.add_subparsers(dest='command', required=True)

    classes = subparsers.add_parser('classes', parents=[common], help='List orbit classes of ball configurations')
    classes.add_argument('--list', dest='list_classes', action='store_true', help='Emit every orbit class')

    subparsers.add_parser('ground-states', parents=[common, coupling], help='Ground states at one coupling')

    regions = subparsers.add_parser('regions', parents=[common], help='Exact phase fan or grid CSV')
    regions.add_argument('--grid', type=int, help='Grid points per axis (odd, >= 3); writes CSV')
    regions.add_argument('--range', dest='extent', type=parse_fraction, default=Fraction(2),
                         help='Grid covers [-range, range]^2 (default: 2)')

    extend = subparsers.add_parser('extend', parents=[common], help='Periodic continuation of a ball configuration')
    extend.add_argument('--center', type=int, required=True, help='Center spin')
    extend.add_argument('--leaves', type=parse_spin_list, required=True, help='Leaf spins, e.g. 1,2,3')
    extend.add_argument('--depth', type=int, default=4, help='Verification depth (default: 4)')

    subparsers.add_parser('verify', parents=[common], help='Run every verification suite')

    peierls = subparsers.add_parser('peierls', parents=[common, coupling], help='Check the Peierls condition')
    peierls.add_argument('--trials', type=int, default=500, help='Random perturbations to test')
    peierls.add_argument('--flips', type=int, default=DEFAULT_FLIPS, help='Maximum flipped sites per perturbation')
    peierls.add_argument('--depth', type=int, default=DEFAULT_DEPTH, help='Maximum depth of flipped sites')
    peierls.add_argument('--config', type=str, help='Check this configuration JSON instead of random ones')
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {name: getattr(args, name) for name in RunConfig.__dataclass_fields__ if hasattr(args, name)}
    return RunConfig(**fields)


def run_classes(config: RunConfig) -> tuple[object, int]:
    orbits = all_orbits(config.k)
    if not config.list_classes:
        return {"k": config.k, "ball_configs": 4 ** (config.k + 2),
                "signatures": len(all_signatures(config.k)), "orbits": len(orbits)}, 0
    listing = []
    for orbit_id, orbit in enumerate(orbits):
        edge, pair = energy_coefficients(orbit.representative)
        listing.append({
            "id": orbit_id,
            "representative": str(orbit.representative),
            "members": [str(member) for member in orbit.sorted_members()],
            "orbit_size": orbit.size,
            "energy_coefficients": [str(edge), pair],
        })
    return listing, 0


def run_ground_states(config: RunConfig) -> tuple[dict, int]:
    J = config.coupling
    if J is None:
        raise ValueError("ground-states needs --j1 and --j2")
    return ground_state_set(J, config.k).to_dict(), 0


def fan_to_dict(fan: RegionFan) -> dict:
    def signatures(minimizers):
        return {"orbits": orbit_ids(minimizers, fan.k), "count": len(minimizers)}

    return {
        "k": fan.k,
        "rays": [{"direction": list(ray.direction), "slope": slope_text(ray.direction), **signatures(ray.minimizers)}
                 for ray in fan.rays],
        "sectors": [{"from": list(sector.start), "to": list(sector.end), "interior": list(sector.interior),
                     **signatures(sector.minimizers)} for sector in fan.sectors],
    }


def run_regions(config: RunConfig) -> tuple[Optional[dict], int]:
    if config.grid is not None:
        rows = grid_labels(config.k, config.grid, config.extent)
        write_grid_csv(rows, config.out)
        return None, 0
    return fan_to_dict(region_fan(config.k)), 0


def run_extend(config: RunConfig) -> tuple[dict, int]:
    ball = ball_config_from_dict({"center": config.center, "leaves": list(config.leaves)})
    if ball.k != config.k:
        raise ValueError(f"--leaves has {len(ball.leaves)} spins, expected k+1 = {config.k + 1}")
    state = extend_periodic(ball)
    report = verify_extension(state, config.depth, seed=config.seed)
    return {"state": state.to_dict(), "verification": report.to_dict()}, 0 if report.passed else 1


def run_verify(config: RunConfig) -> tuple[dict, int]:
    enumerate_ball_configs(config.k)  # size guard before any suite starts
    results = run_all(config.k, config.seed)
    passed = all(result.passed for result in results)
    summary = {
        "k": config.k,
        "seed": config.seed,
        "passed": passed,
        "suites": [result.to_dict() for result in results],
    }
    return summary, 0 if passed else 1


def run_peierls(config: RunConfig) -> tuple[dict, int]:
    if config.config:
        J = config.coupling
        if J is None:
            raise ValueError("peierls --config needs --j1 and --j2")
        sigma = load_finite_configuration(config.config, config.k)
        report = peierls_check(sigma, J)
        ok = report.satisfied and report.routes_agree
        return {"coupling": J.to_dict(), "report": report.to_dict()}, 0 if ok else 1
    result = peierls_suite(config.k, config.trials, config.seed, config.coupling, config.flips, config.depth)
    return result.to_dict(), 0 if result.passed else 1


RUNNERS = {
    'classes': run_classes,
    'ground-states': run_ground_states,
    'regions': run_regions,
    'extend': run_extend,
    'verify': run_verify,
    'peierls': run_peierls,
}


def run(config: RunConfig) -> int:
    """
    Execute one command and write its artifact.

    Args:
        config (RunConfig): Validated run settings

    Returns:
        int: Exit status
    """
    report, status = RUNNERS[config.command](config)
    if report is not None:
        write_json(report, config.out)
    return status


def join_fraction_values(argv: list[str]) -> list[str]:
    """
    Rewrite "--j1 -3/2" as "--j1=-3/2" so argparse does not read a negative fraction as an option.

    Args:
        argv (list[str]): Raw command-line arguments

    Returns:
        list[str]: Arguments with every fraction option joined to its value
    """
    joined = []
    tokens = iter(argv)
    for token in tokens:
        if token in FRACTION_OPTIONS:
            value = next(tokens, None)
            joined.append(token if value is None else f"{token}={value}")
        else:
            joined.append(token)
    return joined


def main(argv: Optional[list[str]] = None) -> int:
    """
    Main function to run the command-line interface.

    Args:
        argv (list, optional): Arguments, defaults to sys.argv[1:]

    Returns:
        int: Exit status (0 pass, 1 verification failure, 2 usage error)
    """
    parser = build_parser()
    args = parser.parse_args(join_fraction_values(sys.argv[1:] if argv is None else argv))

    setup_logging(level='WARNING' if args.quiet else args.log_level, log_to_file=not args.no_log_file)

    try:
        config = config_from_args(args)
    except ValueError as e:
        parser.print_usage(sys.stderr)
        print(f"Error: {e}", file=sys.stderr)
        return 2

    logger.info(f"Running '{config.command}' for k={config.k}")
    try:
        status = run(config)
    except (ValueError, SizeGuardError) as e:
        logger.error(f"Invalid input for '{config.command}': {str(e)}")
        print(f"Error: {e}", file=sys.stderr)
        return 2

    logger.info(f"'{config.command}' finished with exit status {status}")
    return status


if __name__ == "__main__":
    sys.exit(main())
