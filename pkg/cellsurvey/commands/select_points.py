"""
Pick verification points on the edge of predicted coverage over a demand map.

Both maps are boolean CSV matrices with a ``cell_m``, ``origin_x``,
``origin_y`` header. With ``--results`` (CSV ``x,y,covered``) the demand map
is corrected by the verification measurements and written to ``--corrected``.
"""
import argparse
import csv
import io
import logging

from cellsurvey.commands import output_format
from cellsurvey.commands._common import dump_json, read_text, write_output
from cellsurvey.core.errors import SchemaError
from cellsurvey.core.geometry import Point2D
from cellsurvey.coverage.demand import (bool_matrix_csv, correct_demand_map, read_demand_map,
                                        read_predicted_coverage, select_verification_points)

COMMAND_INFO = {
    "help": "select demand-map verification points and apply measured results",
    "formats": ("csv", "json"),
    "default_format": "csv",
}


def add_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--demand", required=True, help="demand node map (boolean CSV matrix)")
    p.add_argument("--coverage", required=True, help="predicted coverage (boolean CSV matrix)")
    p.add_argument("--results", help="verification results, CSV with x,y,covered")
    p.add_argument("--corrected", metavar="PATH", help="where to write the corrected demand map")


def validate(args: argparse.Namespace) -> str | None:
    if bool(args.results) != bool(args.corrected):
        return "--results and --corrected go together"
    return None


def parse_results(text: str) -> list[tuple[Point2D, bool]]:
    rows = list(csv.DictReader(io.StringIO(text)))
    results = []
    for i, row in enumerate(rows, start=1):
        try:
            where = Point2D(float(row["x"]), float(row["y"]))
        except (KeyError, TypeError, ValueError):
            raise SchemaError(f"results row {i}: needs numeric x and y")
        flag = (row.get("covered") or "").strip().lower()
        if flag not in ("0", "1", "true", "false"):
            raise SchemaError(f"results row {i}: covered must be 0/1 or true/false, got {flag!r}")
        results.append((where, flag in ("1", "true")))
    return results


def run(args: argparse.Namespace, log: logging.Logger) -> int:
    demand = read_demand_map(args.demand)
    predicted = read_predicted_coverage(args.coverage)
    points = select_verification_points(predicted, demand)
    log.info(f"{len(points)} verification point(s) out of {len(demand.cells)} demand cell(s)")

    if output_format(args) == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", "x", "y"])
        for p in points:
            writer.writerow([p.id, repr(p.position.x), repr(p.position.y)])
        data = buf.getvalue()
    else:
        data = dump_json([{"id": p.id, "x": p.position.x, "y": p.position.y} for p in points])
    write_output(data, args.out, log, "verification points")

    if args.results:
        corrected = correct_demand_map(demand, parse_results(read_text(args.results)))
        removed = len(demand.cells) - len(corrected.cells)
        log.info(f"Correction cleared {removed} demand cell(s)")
        write_output(bool_matrix_csv(corrected.geometry, corrected.demand), args.corrected, log, "corrected demand map")
    return 0
