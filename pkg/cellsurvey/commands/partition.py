"""Assign every measurement point of a campaign to its closest sensor."""
import argparse
import logging

from cellsurvey.commands import output_format
from cellsurvey.commands._common import dump_json, load_campaign_arg, write_output
from cellsurvey.planning.dominance import (assign_dominances, assignment_csv, cell_polygons,
                                           partition_stats, polygons_geojson)
from cellsurvey.report.console import partition_table, stderr_console

COMMAND_INFO = {
    "help": "split the campaign points among sensors by distance dominance",
    "formats": ("csv", "json"),
    "default_format": "csv",
}


def add_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--campaign", required=True, help="campaign JSON document")
    p.add_argument("--polygons", metavar="PATH", help="also write approximate cell outlines as GeoJSON")
    p.add_argument("--quiet-table", action="store_true", help="do not print the load table on stderr")


def run(args: argparse.Namespace, log: logging.Logger) -> int:
    campaign = load_campaign_arg(args, log)
    assignment = assign_dominances(campaign.sensors, campaign.points)
    stats = partition_stats(assignment)
    log.info(f"Partitioned {stats.total} point(s): load {stats.min_load}..{stats.max_load}")

    if output_format(args) == "csv":
        data = assignment_csv(assignment)
    else:
        data = dump_json({
            "owner": {str(pid): sid for pid, sid in assignment.owner.items()},
            "per_sensor": {str(sid): list(ids) for sid, ids in sorted(assignment.per_sensor.items())},
            "counts": {str(sid): n for sid, n in sorted(stats.counts.items())},
            "max_load": stats.max_load,
            "min_load": stats.min_load,
        })
    write_output(data, args.out, log, "assignment")

    if args.polygons:
        outlines = cell_polygons(campaign.sensors, campaign.area)
        write_output(dump_json(polygons_geojson(outlines)), args.polygons, log, "cell outlines")

    if not args.quiet_table:
        stderr_console().print(partition_table(stats))
    return 0
