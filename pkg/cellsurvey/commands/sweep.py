"""
Repeat synthetic campaigns over point counts and sensor counts.

CSV output is the ``n,k,rep,overall_time_s`` table; ``--convergence`` adds the
long-form ``n,k,rep,generation,best_length_m`` table. See docs/experiments.md.
"""
import argparse
import logging
from pathlib import Path

from cellsurvey.commands import output_format
from cellsurvey.commands._common import dump_json, float_pair, ga_params, int_list, positive_int, write_output
from cellsurvey.core.campaign import dump_campaign
from cellsurvey.report.console import stderr_console, sweep_table
from cellsurvey.sim.simulator import SimConfig
from cellsurvey.sim.sweep import convergence_csv, sweep, times_csv
from cellsurvey.sim.workload import DEFAULT_AREA, DEFAULT_SPEED_KMH, sweep_campaign

COMMAND_INFO = {
    "help": "run repeated synthetic campaigns for the mobility experiments",
    "formats": ("csv", "json"),
    "default_format": "csv",
}


def add_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ns", type=int_list, required=True, metavar="N[,N...]", help="point counts, e.g. 40,50,60")
    p.add_argument("--ks", type=int_list, default=[1], metavar="K[,K...]", help="sensor counts (default: 1)")
    p.add_argument("--reps", type=int, default=1, help="repetitions per (n, k) (default: 1)")
    p.add_argument("--jobs", type=positive_int, default=1, help="worker processes (default: 1)")
    p.add_argument("--area", type=float_pair, default=DEFAULT_AREA, metavar="W,H",
                   help="area in meters (default 50000,50000)")
    p.add_argument("--speed-kmh", type=float, default=DEFAULT_SPEED_KMH, help="sensor speed (default: 30)")
    p.add_argument("--dwell", type=float, default=0.0, help="seconds spent measuring at each point (default: 0)")
    p.add_argument("--convergence", metavar="PATH", help="write per-generation best lengths as CSV")
    p.add_argument("--save-campaigns", metavar="DIR",
                   help="write every generated campaign as JSON so it can be re-run with simulate")


def validate(args: argparse.Namespace) -> str | None:
    if args.reps < 0:
        return f"--reps must be >= 0, got {args.reps}"
    if not args.speed_kmh > 0:
        return "--speed-kmh must be positive"
    if args.dwell < 0:
        return "--dwell must be >= 0"
    if not (args.area[0] > 0 and args.area[1] > 0):
        return "--area must be positive"
    return None


def _save_campaigns(args: argparse.Namespace, base_seed: int, log: logging.Logger) -> None:
    folder = Path(args.save_campaigns)
    folder.mkdir(parents=True, exist_ok=True)
    for n in args.ns:
        for k in args.ks:
            for rep in range(args.reps):
                c = sweep_campaign(n, k, rep, base_seed, args.ks, tuple(args.area), args.speed_kmh)
                (folder / f"campaign_n{n}_k{k}_rep{rep}.json").write_text(dump_campaign(c), encoding="utf-8")
    log.info(f"Saved {len(args.ns) * len(args.ks) * args.reps} campaign(s) → {folder}")


def run(args: argparse.Namespace, log: logging.Logger) -> int:
    base_seed = args.seed or 0
    rows = sweep(
        args.ns, args.ks, args.reps, base_seed,
        ga=ga_params(args),
        config=SimConfig(dwell_s=args.dwell, record_trace=False),
        area=tuple(args.area),
        speed_kmh=args.speed_kmh,
        jobs=args.jobs,
        log=log,
    )

    if output_format(args) == "csv":
        data = times_csv(rows)
    else:
        data = dump_json([r.asdict() for r in rows])
    write_output(data, args.out, log, "sweep table")
    if args.convergence:
        write_output(convergence_csv(rows), args.convergence, log, "convergence table")
    if args.save_campaigns:
        _save_campaigns(args, base_seed, log)

    if rows:
        stderr_console().print(sweep_table(rows))
    return 0
