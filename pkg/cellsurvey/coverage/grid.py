"""
Measurement cartography: mean received level per square cell.

Rows count northing from the origin (row 0 is the southmost row) and columns
count easting. Matrix exports list row 0 first; images are flipped so that
north is up.
"""
import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from cellsurvey.core.errors import OutOfExtent
from cellsurvey.core.geometry import Point2D
from cellsurvey.core.result import RSSI_MAX_DBM, RSSI_MIN_DBM, MeasurementRecord

DEFAULT_CELL_M = 250.0


@dataclass(frozen=True, slots=True)
class GridGeometry:
    cell_m: float
    origin: Point2D
    rows: int
    cols: int

    def __post_init__(self):
        if not self.cell_m > 0:
            raise ValueError(f"cell size must be positive, got {self.cell_m}")
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"grid needs at least one cell, got {self.rows}x{self.cols}")

    @classmethod
    def for_area(cls, area: tuple[float, float], cell_m: float = DEFAULT_CELL_M,
                 origin: Point2D = Point2D(0.0, 0.0)) -> "GridGeometry":
        """Smallest grid of ``cell_m`` cells covering a width x height area."""
        width, height = area
        return cls(cell_m, origin, max(1, math.ceil(height / cell_m)), max(1, math.ceil(width / cell_m)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def cell_of(self, p: Point2D) -> tuple[int, int]:
        """(row, col) holding ``p``; the far edges belong to the last row and column."""
        fx = (p.x - self.origin.x) / self.cell_m
        fy = (p.y - self.origin.y) / self.cell_m
        if not (0.0 <= fx <= self.cols and 0.0 <= fy <= self.rows):
            raise OutOfExtent(f"{p} outside the {self.rows}x{self.cols} grid of {self.cell_m:g} m cells")
        return min(int(fy), self.rows - 1), min(int(fx), self.cols - 1)

    def center(self, row: int, col: int) -> Point2D:
        return Point2D(self.origin.x + (col + 0.5) * self.cell_m, self.origin.y + (row + 0.5) * self.cell_m)


@dataclass(frozen=True)
class CoverageGrid:
    geometry: GridGeometry
    values: np.ndarray   # mean rssi dBm, NaN where empty
    counts: np.ndarray   # samples per cell

    def value(self, row: int, col: int) -> Optional[float]:
        return float(self.values[row, col]) if self.counts[row, col] > 0 else None

    @property
    def populated(self) -> int:
        return int(np.count_nonzero(self.counts))


def rasterize(records: Iterable[MeasurementRecord], geometry: GridGeometry) -> CoverageGrid:
    """
    Average rssi per cell. Samples with unknown rssi are left out.

    Samples are summed in a canonical (cell, value) order, so any permutation
    of the same records gives a bitwise identical grid.

    Raises:
        OutOfExtent: a record lies outside the grid
    """
    cells: list[int] = []
    levels: list[float] = []
    for r in records:
        if r.cell.rssi_dbm is None:
            continue
        row, col = geometry.cell_of(r.position)
        cells.append(row * geometry.cols + col)
        levels.append(float(r.cell.rssi_dbm))

    size = geometry.rows * geometry.cols
    index = np.asarray(cells, dtype=np.int64)
    level = np.asarray(levels, dtype=float)
    order = np.lexsort((level, index))
    sums = np.bincount(index[order], weights=level[order], minlength=size)
    counts = np.bincount(index, minlength=size)

    values = np.full(size, np.nan)
    populated = counts > 0
    values[populated] = sums[populated] / counts[populated]
    return CoverageGrid(geometry, values.reshape(geometry.shape), counts.reshape(geometry.shape))


def grid_csv(grid: CoverageGrid) -> str:
    """Mean dBm matrix, row 0 first; empty cells are blank."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in range(grid.geometry.rows):
        writer.writerow([
            "" if grid.counts[row, col] == 0 else repr(float(grid.values[row, col]))
            for col in range(grid.geometry.cols)
        ])
    return buf.getvalue()


def _pgm(pixels: np.ndarray) -> bytes:
    rows, cols = pixels.shape
    header = f"P5\n{cols} {rows}\n255\n".encode("ascii")
    return header + np.flipud(pixels).astype(np.uint8).tobytes()


def grid_pgm(grid: CoverageGrid) -> bytes:
    """Binary greyscale image: -113 dBm is black, -51 dBm white, empty cells black."""
    span = RSSI_MAX_DBM - RSSI_MIN_DBM
    scaled = np.where(grid.counts > 0, (np.nan_to_num(grid.values, nan=RSSI_MIN_DBM) - RSSI_MIN_DBM) / span, 0.0)
    return _pgm(np.clip(np.floor(scaled * 255 + 0.5), 0, 255))


def mask_pgm(grid: CoverageGrid) -> bytes:
    """Companion image telling populated cells (white) from empty ones."""
    return _pgm(np.where(grid.counts > 0, 255, 0))
