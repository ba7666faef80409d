"""Small object builders shared by the test modules."""
import json
from typing import Optional

from cellsurvey.core.campaign import BaseStation, Campaign, MeasurementPoint, SensorNode, kmh_to_ms
from cellsurvey.core.geometry import Point2D
from cellsurvey.core.result import CellMeasurement, MeasurementRecord
from cellsurvey.planning.genetic import GAParams

FAST_GA = GAParams(population_size=20, generations=30, seed=1)


def point(pid: int, x: float, y: float, target_bs: Optional[int] = None) -> MeasurementPoint:
    return MeasurementPoint(pid, Point2D(x, y), target_bs)


def sensor_node(sid: int, x: float, y: float, speed_kmh: float = 30.0) -> SensorNode:
    return SensorNode(sid, Point2D(x, y), kmh_to_ms(speed_kmh))


def station(bid: int, x: float, y: float, cell_id: Optional[int] = None, antenna: str = "omni") -> BaseStation:
    return BaseStation(bid, Point2D(x, y), 100 + bid if cell_id is None else cell_id, antenna)


def cell(cell_id: int = 101, rssi: Optional[int] = -70, ber: Optional[float] = 0.14, ta: int = 1) -> CellMeasurement:
    return CellMeasurement(
        cell_id=cell_id, timing_advance=ta, mcc=208, mnc=10, lac=7,
        rssi_dbm=rssi, ber_pct=ber, bcc=1, btcc=2, ncc=3,
    )


def record(seq: int, pid: int, x: float = 0.0, y: float = 0.0, t: float = 0.0,
           rssi: Optional[int] = -70, cell_id: int = 101) -> MeasurementRecord:
    return MeasurementRecord(seq, pid, Point2D(x, y), t, cell(cell_id, rssi))


def four_stations(width: float = 10_000.0, height: float = 10_000.0) -> tuple[BaseStation, ...]:
    """One base station near each corner, cell ids 101..104."""
    return (
        station(1, width * 0.25, height * 0.25),
        station(2, width * 0.75, height * 0.25),
        station(3, width * 0.25, height * 0.75),
        station(4, width * 0.75, height * 0.75),
    )


def two_sensor_campaign(seed: int = 7) -> Campaign:
    """Two sensors on opposite sides of a 10 km square, three points near each."""
    return Campaign(
        area=(10_000.0, 10_000.0),
        sensors=(sensor_node(1, 1000.0, 5000.0), sensor_node(2, 9000.0, 5000.0)),
        points=(
            point(1, 1500.0, 4000.0), point(2, 2500.0, 6000.0), point(3, 500.0, 7000.0),
            point(4, 8500.0, 4000.0), point(5, 7500.0, 6000.0), point(6, 9500.0, 7000.0),
        ),
        base_stations=four_stations(),
        seed=seed,
    )


def campaign_doc(**overrides) -> dict:
    doc = {
        "area": {"width_m": 10000, "height_m": 10000},
        "seed": 42,
        "sensors": [
            {"id": 1, "x": 1000, "y": 5000, "speed_kmh": 30},
            {"id": 2, "x": 9000, "y": 5000, "speed_kmh": 45},
        ],
        "points": [
            {"id": 1, "x": 1500, "y": 4000},
            {"id": 2, "x": 8500, "y": 4000, "target_bs": 2},
            {"id": 3, "x": 5000, "y": 9000},
        ],
        "base_stations": [
            {"id": 1, "x": 2500, "y": 2500, "cell_id": 101, "antenna": "omni"},
            {"id": 2, "x": 7500, "y": 2500, "cell_id": 102, "antenna": "sector"},
        ],
    }
    doc.update(overrides)
    return doc


def campaign_json(**overrides) -> str:
    return json.dumps(campaign_doc(**overrides))
