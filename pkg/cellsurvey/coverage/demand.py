"""
Demand node map correction.

Verification points are picked on the frontier of the area that is both
predicted to be covered and holds demand: covered demand cells with at least
one uncovered 4-neighbour inside the grid. Measuring there decides whether a
demand node stays on the map.
"""
import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from cellsurvey.core.campaign import MeasurementPoint
from cellsurvey.core.errors import GeometryMismatch, OutOfExtent, SchemaError, UnknownCell
from cellsurvey.core.geometry import Point2D
from cellsurvey.coverage.grid import GridGeometry

HEADER_KEYS = ("cell_m", "origin_x", "origin_y")


@dataclass(frozen=True)
class DemandNodeMap:
    geometry: GridGeometry
    demand: np.ndarray  # bool, True where a demand node sits

    @property
    def cells(self) -> set[tuple[int, int]]:
        return {(int(r), int(c)) for r, c in zip(*np.nonzero(self.demand))}


@dataclass(frozen=True)
class PredictedCoverage:
    geometry: GridGeometry
    covered: np.ndarray  # bool, from an external prediction


def _check_geometry(a: GridGeometry, b: GridGeometry) -> None:
    if a != b:
        raise GeometryMismatch(f"grids differ: {a} vs {b}")


def frontier_mask(pred: PredictedCoverage, demand: DemandNodeMap) -> np.ndarray:
    """Covered demand cells touching an uncovered cell; neighbours off the grid do not count."""
    _check_geometry(pred.geometry, demand.geometry)
    covered = np.asarray(pred.covered, dtype=bool)
    padded = np.pad(covered, 1, constant_values=True)
    uncovered_neighbour = (
        ~padded[:-2, 1:-1] | ~padded[2:, 1:-1] | ~padded[1:-1, :-2] | ~padded[1:-1, 2:]
    )
    return np.asarray(demand.demand, dtype=bool) & covered & uncovered_neighbour


def select_verification_points(pred: PredictedCoverage, demand: DemandNodeMap) -> list[MeasurementPoint]:
    """
    Centres of frontier cells in row-major order.

    A point's id is its cell index + 1 (row * cols + col + 1).

    Raises:
        GeometryMismatch: the two grids differ
    """
    mask = frontier_mask(pred, demand)
    g = demand.geometry
    return [
        MeasurementPoint(int(row) * g.cols + int(col) + 1, g.center(int(row), int(col)))
        for row, col in zip(*np.nonzero(mask))
    ]


def correct_demand_map(demand: DemandNodeMap,
                       results: Iterable[tuple[Union[MeasurementPoint, Point2D], bool]]) -> DemandNodeMap:
    """
    Clear demand cells whose verification measurement found coverage.

    Cells without a result, or whose result found no coverage, keep their value.

    Raises:
        UnknownCell: a result lies outside the grid or on a cell without demand
    """
    corrected = np.array(demand.demand, dtype=bool, copy=True)
    for where, covered in results:
        position = where.position if isinstance(where, MeasurementPoint) else where
        try:
            row, col = demand.geometry.cell_of(position)
        except OutOfExtent as e:
            raise UnknownCell(str(e))
        if not demand.demand[row, col]:
            raise UnknownCell(f"{position} falls in cell ({row}, {col}) which holds no demand node")
        if covered:
            corrected[row, col] = False
    return DemandNodeMap(demand.geometry, corrected)


def parse_bool_matrix(text: str) -> tuple[GridGeometry, np.ndarray]:
    """
    Read a boolean grid: ``cell_m``, ``origin_x``, ``origin_y`` header lines
    (``key,value``) then one CSV row of 0/1 per grid row, row 0 first.
    """
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(v.strip() for v in r)]
    if len(rows) < len(HEADER_KEYS) + 1:
        raise SchemaError("boolean grid needs a 3-line header and at least one row")
    header: dict[str, float] = {}
    for key, row in zip(HEADER_KEYS, rows):
        if len(row) != 2 or row[0].strip() != key:
            raise SchemaError(f"expected header line '{key},<value>', got {','.join(row)!r}")
        try:
            header[key] = float(row[1])
        except ValueError:
            raise SchemaError(f"{key}: not a number {row[1]!r}")

    body = rows[len(HEADER_KEYS):]
    width = len(body[0])
    cells = []
    for i, row in enumerate(body):
        if len(row) != width:
            raise SchemaError(f"grid row {i} has {len(row)} cells, expected {width}")
        values = [v.strip() for v in row]
        if any(v not in ("0", "1") for v in values):
            raise SchemaError(f"grid row {i} holds values other than 0 and 1")
        cells.append([v == "1" for v in values])

    try:
        geometry = GridGeometry(header["cell_m"], Point2D(header["origin_x"], header["origin_y"]), len(body), width)
    except ValueError as e:
        raise SchemaError(str(e))
    return geometry, np.array(cells, dtype=bool)


def bool_matrix_csv(geometry: GridGeometry, mask: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["cell_m", repr(geometry.cell_m)])
    writer.writerow(["origin_x", repr(geometry.origin.x)])
    writer.writerow(["origin_y", repr(geometry.origin.y)])
    for row in np.asarray(mask, dtype=bool):
        writer.writerow([1 if v else 0 for v in row])
    return buf.getvalue()


def read_demand_map(path: Union[str, Path]) -> DemandNodeMap:
    return DemandNodeMap(*parse_bool_matrix(Path(path).read_text(encoding="utf-8")))


def read_predicted_coverage(path: Union[str, Path]) -> PredictedCoverage:
    return PredictedCoverage(*parse_bool_matrix(Path(path).read_text(encoding="utf-8")))
