"""
Partition measurement points among mobile sensors by distance dominance.

A sensor m dominates another sensor r at x when x is no farther from m than
from r; the points a sensor measures are those it dominates against every
other sensor. Equidistant points go to the lowest sensor id so that each
point belongs to exactly one sensor.
"""
import csv
import io
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.spatial import QhullError, Voronoi, cKDTree

from cellsurvey.core.campaign import MeasurementPoint, SensorNode
from cellsurvey.core.errors import EmptySensorSet
from cellsurvey.core.geometry import Point2D

# Below this many point/sensor pairs the direct scan is cheaper than building a tree
INDEX_THRESHOLD = 4096
# Nearest sensors fetched per point from the tree before falling back to a full scan
INDEX_NEIGHBORS = 8
# Relative gap under which two tree distances are re-checked exactly
TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DominanceAssignment:
    owner: dict[int, int]                      # point id -> sensor id
    per_sensor: dict[int, tuple[int, ...]]     # sensor id -> point ids, input order

    def points_of(self, sensor_id: int) -> tuple[int, ...]:
        return self.per_sensor.get(sensor_id, ())


@dataclass(frozen=True)
class PartitionStats:
    counts: dict[int, int]
    total: int
    max_load: int
    min_load: int

    @property
    def imbalance(self) -> int:
        return self.max_load - self.min_load


def _squared_distance(a: Point2D, b: Point2D) -> float:
    dx, dy = a.x - b.x, a.y - b.y
    return dx * dx + dy * dy


def dominates(m1: SensorNode, m2: SensorNode, x: Point2D) -> bool:
    """True when ``x`` lies in the closed half plane of m1 against m2."""
    return _squared_distance(x, m1.position) <= _squared_distance(x, m2.position)


def _nearest_by_scan(p: Point2D, ordered: Sequence[SensorNode]) -> int:
    # ordered is sorted by id, so strict < keeps the lowest id on ties.
    # Squared distances are exact on integer coordinates, where hypot may round.
    best = ordered[0]
    best_distance = _squared_distance(p, best.position)
    for sensor in ordered[1:]:
        distance = _squared_distance(p, sensor.position)
        if distance < best_distance:
            best, best_distance = sensor, distance
    return best.id


def _owners_by_index(points: Sequence[MeasurementPoint], ordered: Sequence[SensorNode]) -> list[int]:
    coords = np.array([[s.position.x, s.position.y] for s in ordered], dtype=float)
    targets = np.array([[p.position.x, p.position.y] for p in points], dtype=float)
    k = min(len(ordered), INDEX_NEIGHBORS)
    distances, indices = cKDTree(coords).query(targets, k=k)
    if k == 1:
        return [ordered[0].id] * len(points)

    # a point is unambiguous when its runner-up is clearly farther away
    gap = distances[:, 1] - distances[:, 0]
    clear = gap > TIE_TOLERANCE * np.maximum(distances[:, 0], 1.0)

    owners: list[int] = []
    for i, point in enumerate(points):
        if clear[i]:
            owners.append(ordered[indices[i, 0]].id)
            continue
        near = distances[i] <= distances[i, 0] + TIE_TOLERANCE * max(distances[i, 0], 1.0)
        if near.all() and k < len(ordered):
            owners.append(_nearest_by_scan(point.position, ordered))
            continue
        candidates = sorted((ordered[j] for j in indices[i][near]), key=lambda s: s.id)
        owners.append(_nearest_by_scan(point.position, candidates))
    return owners


def assign_dominances(sensors: Sequence[SensorNode],
                      points: Sequence[MeasurementPoint],
                      use_index: Optional[bool] = None) -> DominanceAssignment:
    """
    Give every measurement point to its closest sensor.

    Args:
        sensors: mobile nodes; positions may coincide
        points: measurement points
        use_index: force the k-d tree on or off; by default it is used for
            large instances. Both paths return identical assignments.

    Raises:
        EmptySensorSet: no sensors given
    """
    if not sensors:
        raise EmptySensorSet("cannot partition measurement points without sensors")
    ordered = sorted(sensors, key=lambda s: s.id)
    if use_index is None:
        use_index = len(points) * len(ordered) > INDEX_THRESHOLD

    if use_index and points:
        owners = _owners_by_index(points, ordered)
    else:
        owners = [_nearest_by_scan(p.position, ordered) for p in points]

    owner: dict[int, int] = {}
    buckets: dict[int, list[int]] = {s.id: [] for s in ordered}
    for point, sensor_id in zip(points, owners):
        owner[point.id] = sensor_id
        buckets[sensor_id].append(point.id)
    return DominanceAssignment(owner=owner, per_sensor={k: tuple(v) for k, v in buckets.items()})


def partition_stats(a: DominanceAssignment) -> PartitionStats:
    counts = {sensor_id: len(ids) for sensor_id, ids in a.per_sensor.items()}
    loads = list(counts.values()) or [0]
    return PartitionStats(counts=counts, total=sum(loads), max_load=max(loads), min_load=min(loads))


def assignment_csv(a: DominanceAssignment) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["point_id", "sensor_id"])
    for point_id, sensor_id in a.owner.items():
        writer.writerow([point_id, sensor_id])
    return buf.getvalue()


# Cell outlines, for plotting only

def _clip(polygon: list[tuple[float, float]], a: Point2D, b: Point2D) -> list[tuple[float, float]]:
    """Keep the part of ``polygon`` no farther from a than from b."""
    nx, ny = b.x - a.x, b.y - a.y
    c = (b.x * b.x + b.y * b.y - a.x * a.x - a.y * a.y) / 2.0

    def inside(q):
        return q[0] * nx + q[1] * ny <= c

    out: list[tuple[float, float]] = []
    for i, current in enumerate(polygon):
        previous = polygon[i - 1]
        if inside(current):
            if not inside(previous):
                out.append(_cross(previous, current, nx, ny, c))
            out.append(current)
        elif inside(previous):
            out.append(_cross(previous, current, nx, ny, c))
    return out


def _cross(p, q, nx, ny, c):
    dp = p[0] * nx + p[1] * ny - c
    dq = q[0] * nx + q[1] * ny - c
    t = dp / (dp - dq)
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def _neighbor_pairs(positions: list[Point2D]) -> Optional[set[tuple[int, int]]]:
    if len(positions) < 4:
        return None
    try:
        vor = Voronoi(np.array([p.as_tuple() for p in positions]))
    except QhullError:
        # degenerate layouts (collinear sensors) fall back to all pairs
        return None
    return {(int(i), int(j)) for i, j in vor.ridge_points} | {(int(j), int(i)) for i, j in vor.ridge_points}


def cell_polygons(sensors: Sequence[SensorNode], area: tuple[float, float]) -> dict[int, list[tuple[float, float]]]:
    """
    Approximate dominance cells clipped to the campaign area.

    Coincident sensors share one position; the lowest id gets the cell and the
    others get an empty outline.
    """
    if not sensors:
        raise EmptySensorSet("no sensors to outline")
    ordered = sorted(sensors, key=lambda s: s.id)
    unique: list[Point2D] = []
    first_owner: dict[Point2D, int] = {}
    for s in ordered:
        if s.position not in first_owner:
            first_owner[s.position] = s.id
            unique.append(s.position)

    pairs = _neighbor_pairs(unique)
    width, height = area
    cells: dict[int, list[tuple[float, float]]] = {}
    for i, here in enumerate(unique):
        polygon = [(0.0, 0.0), (width, 0.0), (width, height), (0.0, height)]
        for j, other in enumerate(unique):
            if i == j or (pairs is not None and (i, j) not in pairs):
                continue
            polygon = _clip(polygon, here, other)
            if not polygon:
                break
        cells[first_owner[here]] = polygon
    return {s.id: cells.get(s.id, []) for s in ordered}


def polygons_geojson(cells: dict[int, list[tuple[float, float]]]) -> dict:
    features = []
    for sensor_id, ring in cells.items():
        coordinates = [[x, y] for x, y in ring]
        if coordinates:
            coordinates.append(coordinates[0])
        features.append({
            "type": "Feature",
            "properties": {"sensor_id": sensor_id},
            "geometry": {"type": "Polygon", "coordinates": [coordinates] if coordinates else []},
        })
    return {"type": "FeatureCollection", "features": features}


def points_by_id(points: Iterable[MeasurementPoint]) -> dict[int, MeasurementPoint]:
    return {p.id: p for p in points}
