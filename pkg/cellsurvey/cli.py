import argparse
from typing import Optional

from cellsurvey import commands


def _common_flags() -> argparse.ArgumentParser:
    """Flags every command accepts, placed after the command name."""
    p = argparse.ArgumentParser(add_help=False)

    p.add_argument(
        "--seed",
        type=int,
        help="Seed overriding the campaign seed (or the base seed of a sweep)"
    )

    # Route optimisation
    p.add_argument("--ga-pop", type=int, help="GA population size (default: 100)")
    p.add_argument("--ga-gens", type=int, help="GA generations (default: 500)")
    p.add_argument("--ga-mut", type=float, help="GA swap mutation rate per position (default: 0.02)")
    p.add_argument("--ga-elite", type=int, help="GA elite count (default: 2)")

    # Output options
    p.add_argument(
        "--out",
        help="Write the command's data to this file instead of stdout"
    )

    p.add_argument(
        "--format",
        choices=["json", "csv"],
        help="Output format (default depends on the command)"
    )

    # Verbosity
    p.add_argument(
        "-v", "--verbose",
        action="count",
        default=0,
        help="Increase verbosity (-v for info, -vv for debug)"
    )
    return p


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cellsurvey",
        description="Cellular measurement campaigns with mobile sensors: partitioning, "
                    "route optimisation, protocol simulation and telemetry parsing"
    )
    subparsers = p.add_subparsers(dest="command", metavar="COMMAND", required=True)
    commands.register(subparsers, _common_flags())
    return p


def validate_args(args) -> tuple[bool, Optional[str]]:
    """
    Validate command line arguments and return (is_valid, error_message).
    """
    if args.seed is not None and not 0 <= args.seed < 2**64:
        return False, "--seed must be an unsigned 64-bit integer"

    if args.ga_pop is not None and args.ga_pop < 2:
        return False, "--ga-pop must be at least 2"
    if args.ga_gens is not None and args.ga_gens < 0:
        return False, "--ga-gens must be >= 0"
    if args.ga_mut is not None and not 0.0 <= args.ga_mut <= 1.0:
        return False, "--ga-mut must be within [0, 1]"
    if args.ga_elite is not None:
        population = args.ga_pop if args.ga_pop is not None else 100
        if not 0 <= args.ga_elite < population:
            return False, "--ga-elite must be >= 0 and below the population size"

    problem = commands.validate(args)
    if problem:
        return False, problem
    return True, None


def print_usage_examples():
    """Print usage examples for every command."""
    examples = [
        "# Partition and route",
        "cellsurvey partition --campaign campaign.json",
        "cellsurvey partition --campaign campaign.json --format json --polygons cells.geojson",
        "cellsurvey route --n 50 --seed 7 --trace convergence.csv",
        "cellsurvey route --points points.json --exact",
        "",
        "# Simulation",
        "cellsurvey simulate --campaign campaign.json --mode both --out report.json",
        "cellsurvey simulate --campaign campaign.json --trace trace.txt --check -v",
        "cellsurvey trace-replay --trace trace.txt --campaign campaign.json",
        "",
        "# Experiments",
        "cellsurvey sweep --ns 40,50,60 --ks 1 --reps 10 --convergence convergence.csv",
        "cellsurvey sweep --ns 100 --ks 1,5 --reps 10 --jobs 4 --out times.csv",
        "",
        "# Telemetry",
        "cellsurvey parse-nmea --input gps.log",
        "cellsurvey parse-cell --input modem.log --format csv",
        "cellsurvey parse-cell --csq --input csq.log",
        "",
        "# Coverage",
        "cellsurvey rasterize --records report.json --campaign campaign.json --pgm map.pgm --mask mask.pgm",
        "cellsurvey select-points --demand demand.csv --coverage predicted.csv",
        "cellsurvey select-points --demand demand.csv --coverage predicted.csv "
        "--results verified.csv --corrected demand_new.csv",
    ]

    print("Usage Examples:")
    print("=" * 50)
    for example in examples:
        print(example)
