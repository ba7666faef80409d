"""Synthetic campaigns: uniform random points and sensors over a rectangular area."""
from typing import Sequence

import numpy as np

from cellsurvey.core.campaign import BaseStation, Campaign, MeasurementPoint, SensorNode, kmh_to_ms
from cellsurvey.core.geometry import Point2D
from cellsurvey.core.utils import CAMPAIGN_STREAM, SENSOR_STREAM, derive_seed

DEFAULT_AREA = (50_000.0, 50_000.0)
DEFAULT_SPEED_KMH = 30.0
BS_GRID = 5
BS_FIRST_CELL_ID = 100


def _uniform(n: int, area: tuple[float, float], seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.uniform((0.0, 0.0), area, size=(n, 2))


def generate_points(n: int, area: tuple[float, float] = DEFAULT_AREA, seed: int = 0) -> list[MeasurementPoint]:
    """``n`` points i.i.d. uniform over the area, ids 1..n."""
    if n < 1:
        raise ValueError(f"need at least one point, got {n}")
    xy = _uniform(n, area, seed)
    return [MeasurementPoint(i + 1, Point2D(float(x), float(y))) for i, (x, y) in enumerate(xy)]


def generate_sensors(k: int, area: tuple[float, float], seed: int,
                     speed_kmh: float = DEFAULT_SPEED_KMH) -> list[SensorNode]:
    xy = _uniform(k, area, seed)
    speed = kmh_to_ms(speed_kmh)
    return [SensorNode(i + 1, Point2D(float(x), float(y)), speed) for i, (x, y) in enumerate(xy)]


def grid_base_stations(area: tuple[float, float], per_side: int = BS_GRID) -> list[BaseStation]:
    """Base stations at the centres of a per_side x per_side grid, row by row from the south."""
    width, height = area
    stations = []
    for row in range(per_side):
        for col in range(per_side):
            index = row * per_side + col
            stations.append(BaseStation(
                id=index + 1,
                position=Point2D((col + 0.5) * width / per_side, (row + 0.5) * height / per_side),
                cell_id=BS_FIRST_CELL_ID + index,
                static_info="omni",
            ))
    return stations


def sweep_campaign(n: int, k: int, rep: int, base_seed: int, ks: Sequence[int],
                   area: tuple[float, float] = DEFAULT_AREA,
                   speed_kmh: float = DEFAULT_SPEED_KMH) -> Campaign:
    """
    The campaign for one sweep cell.

    Points depend on (base seed, n, rep) only, and sensors are the first k of
    max(ks) drawn from their own stream, so rows that differ only in k share
    the same points and the same first sensor.
    """
    points = generate_points(n, area, derive_seed(base_seed, n, rep))
    pool = generate_sensors(max(ks), area, derive_seed(base_seed, n, rep, SENSOR_STREAM), speed_kmh)
    return Campaign(
        area=area,
        sensors=tuple(pool[:k]),
        points=tuple(points),
        base_stations=tuple(grid_base_stations(area)),
        seed=derive_seed(base_seed, n, rep, CAMPAIGN_STREAM),
    )
