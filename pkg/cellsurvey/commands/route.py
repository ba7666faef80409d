"""
Order a set of measurement points into a short open path.

Points come from ``--points`` (a JSON list of {id,x,y}, or any object with a
"points" list and an optional "start" {x,y}) or are drawn uniformly at random
when only ``--n`` is given. With both, the first N points of the file are used.
"""
import argparse
import csv
import io
import logging

from cellsurvey.commands import output_format
from cellsurvey.commands._common import dump_json, float_pair, ga_params, read_json, write_output
from cellsurvey.core.campaign import points_from_list
from cellsurvey.core.errors import SchemaError
from cellsurvey.core.geometry import Point2D
from cellsurvey.planning.genetic import Route, brute_force_route, optimize_route
from cellsurvey.sim.workload import DEFAULT_AREA, generate_points

COMMAND_INFO = {
    "help": "optimise the visiting order of measurement points with the genetic algorithm",
    "formats": ("json", "csv"),
    "default_format": "json",
}


def add_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--points", help="JSON file with the points to visit")
    p.add_argument("--n", type=int, help="number of points (random points when --points is absent)")
    p.add_argument("--start", type=float_pair, metavar="X,Y", help="start position in meters (default 0,0)")
    p.add_argument("--area", type=float_pair, default=DEFAULT_AREA, metavar="W,H",
                   help="area for random points (default 50000,50000)")
    p.add_argument("--exact", action="store_true", help="exhaustive search instead of the GA (at most 10 points)")
    p.add_argument("--trace", metavar="PATH", help="write the GA convergence trace as CSV")


def validate(args: argparse.Namespace) -> str | None:
    if args.n is not None and args.n < 1:
        return f"--n must be at least 1, got {args.n}"
    if args.points is None and args.n is None:
        return "route needs --points or --n"
    if args.exact and args.trace:
        return "--trace has nothing to write with --exact"
    return None


def _load(args: argparse.Namespace) -> tuple[Point2D, list]:
    start = Point2D(*args.start) if args.start else Point2D(0.0, 0.0)
    if args.points is None:
        return start, generate_points(args.n, tuple(args.area), args.seed or 0)

    doc = read_json(args.points)
    if isinstance(doc, dict):
        if "points" not in doc:
            raise SchemaError(f"{args.points}: no 'points' list")
        if "start" in doc and args.start is None:
            s = doc["start"]
            if not isinstance(s, dict) or not {"x", "y"} <= s.keys():
                raise SchemaError(f"{args.points}: start must be an object with x and y")
            try:
                start = Point2D(float(s["x"]), float(s["y"]))
            except (TypeError, ValueError):
                raise SchemaError(f"{args.points}: start coordinates must be finite numbers")
        doc = doc["points"]
    points = points_from_list(doc)
    return start, points[:args.n] if args.n is not None else points


def route_csv(route: Route) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["order", "point_id", "x", "y"])
    for i, p in enumerate(route.points, start=1):
        writer.writerow([i, p.id, repr(p.position.x), repr(p.position.y)])
    return buf.getvalue()


def run(args: argparse.Namespace, log: logging.Logger) -> int:
    start, points = _load(args)
    log.info(f"Routing {len(points)} point(s) from {start}")

    if args.exact:
        route, trace = brute_force_route(start, points), None
    else:
        params = ga_params(args)
        route, trace = optimize_route(start, points, params)
        log.info(f"GA: {params.generations} generation(s) of {params.population_size}, "
                 f"best {route.length:.1f} m")

    if output_format(args) == "csv":
        data = route_csv(route)
    else:
        data = dump_json({
            "start": {"x": start.x, "y": start.y},
            "order": list(route.ids),
            "length_m": route.length,
            "method": "exhaustive" if args.exact else "genetic",
            "seed": None if args.exact else (args.seed or 0),
        })
    write_output(data, args.out, log, "route")
    if trace is not None and args.trace:
        write_output(trace.to_csv(), args.trace, log, "convergence trace")
    return 0
