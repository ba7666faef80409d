"""
Turn the measurements of a simulated campaign into a coverage grid.

``--records`` takes the JSON report written by ``simulate`` (for ``--mode
both`` reports pick the run with ``--run``) or a bare list of records.
"""
import argparse
import logging

from cellsurvey.commands import output_format
from cellsurvey.commands._common import dump_json, float_pair, read_json, write_output
from cellsurvey.core.campaign import read_campaign
from cellsurvey.core.errors import SchemaError
from cellsurvey.core.geometry import Point2D
from cellsurvey.core.result import MeasurementRecord
from cellsurvey.coverage.grid import DEFAULT_CELL_M, CoverageGrid, GridGeometry, grid_csv, grid_pgm, mask_pgm, rasterize
from cellsurvey.sim.workload import DEFAULT_AREA

COMMAND_INFO = {
    "help": "average measured signal levels per grid cell",
    "formats": ("csv", "json"),
    "default_format": "csv",
}


def add_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--records", required=True, help="simulate report JSON, or a JSON list of records")
    p.add_argument("--run", choices=("k", "single"), default="k", help="run to use from a two-run report")
    p.add_argument("--campaign", help="take the grid extent from this campaign's area")
    p.add_argument("--area", type=float_pair, metavar="W,H", help="grid extent in meters (default 50000,50000)")
    p.add_argument("--cell-m", type=float, default=DEFAULT_CELL_M, help="cell size in meters (default: 250)")
    p.add_argument("--pgm", metavar="PATH", help="also write a greyscale image")
    p.add_argument("--mask", metavar="PATH", help="also write the populated-cell mask image")


def validate(args: argparse.Namespace) -> str | None:
    if not args.cell_m > 0:
        return "--cell-m must be positive"
    if args.campaign and args.area:
        return "give either --campaign or --area, not both"
    return None


def load_records(doc, run: str) -> list[MeasurementRecord]:
    if isinstance(doc, dict) and "records" not in doc:
        if run not in doc:
            raise SchemaError(f"report holds no '{run}' run")
        doc = doc[run]
    items = doc["records"] if isinstance(doc, dict) else doc
    if not isinstance(items, list):
        raise SchemaError("records must be a list")
    try:
        return [MeasurementRecord.from_dict(item) for item in items]
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"malformed measurement record: {e}")


def grid_json(grid: CoverageGrid) -> str:
    g = grid.geometry
    return dump_json({
        "cell_m": g.cell_m,
        "origin": {"x": g.origin.x, "y": g.origin.y},
        "rows": g.rows,
        "cols": g.cols,
        "values": [[grid.value(r, c) for c in range(g.cols)] for r in range(g.rows)],
        "counts": grid.counts.astype(int).tolist(),
    })


def run(args: argparse.Namespace, log: logging.Logger) -> int:
    records = load_records(read_json(args.records), args.run)
    if args.campaign:
        area = read_campaign(args.campaign).area
    else:
        area = tuple(args.area) if args.area else DEFAULT_AREA
    geometry = GridGeometry.for_area(area, args.cell_m, Point2D(0.0, 0.0))
    grid = rasterize(records, geometry)
    log.info(f"Rasterized {len(records)} record(s) into {grid.populated} of {geometry.rows * geometry.cols} cells")

    data = grid_csv(grid) if output_format(args) == "csv" else grid_json(grid)
    write_output(data, args.out, log, "coverage grid")
    if args.pgm:
        write_output(grid_pgm(grid), args.pgm, log, "coverage image")
    if args.mask:
        write_output(mask_pgm(grid), args.mask, log, "coverage mask")
    return 0
