import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Optional, Union

from cellsurvey.core.errors import BoundsError, DuplicateId, SchemaError
from cellsurvey.core.geometry import Point2D
from cellsurvey.core.result import MeasurementRecord

# Fields a sensor reads at every point unless told otherwise
DEFAULT_REQUIRED_FIELDS = frozenset({
    "cell_id", "timing_advance", "mcc", "mnc", "lac",
    "rssi_dbm", "rssi_delta", "ber_pct", "ber_delta", "bcc", "btcc", "ncc",
})

U64_MAX = 2**64 - 1


def kmh_to_ms(speed_kmh: float) -> float:
    return speed_kmh / 3.6


def ms_to_kmh(speed_ms: float) -> float:
    return speed_ms * 3.6


@dataclass(frozen=True, slots=True)
class MeasurementPoint:
    id: int
    position: Point2D
    target_bs: Optional[int] = None
    required_fields: frozenset[str] = DEFAULT_REQUIRED_FIELDS


@dataclass(frozen=True, slots=True)
class SensorNode:
    id: int
    position: Point2D
    speed: float  # m/s
    store: tuple[MeasurementRecord, ...] = ()

    def __post_init__(self):
        if not self.speed > 0:
            raise SchemaError(f"sensor {self.id}: speed must be positive, got {self.speed}")


@dataclass(frozen=True, slots=True)
class BaseStation:
    id: int
    position: Point2D
    cell_id: int
    static_info: str = ""  # antenna type label


@dataclass(frozen=True, slots=True)
class Campaign:
    """A measurement campaign: area, mobile sensors, points to visit and the static BS table."""
    area: tuple[float, float]
    sensors: tuple[SensorNode, ...]
    points: tuple[MeasurementPoint, ...]
    base_stations: tuple[BaseStation, ...] = ()
    seed: int = 0

    @property
    def width(self) -> float:
        return self.area[0]

    @property
    def height(self) -> float:
        return self.area[1]

    def contains(self, p: Point2D) -> bool:
        return 0.0 <= p.x <= self.width and 0.0 <= p.y <= self.height

    def with_seed(self, seed: int) -> "Campaign":
        return replace(self, seed=seed)

    def single_sensor(self) -> "Campaign":
        """Same campaign measured by the lowest-id sensor alone."""
        first = min(self.sensors, key=lambda s: s.id)
        return replace(self, sensors=(first,))

    def base_station_by_cell(self, cell_id: int) -> Optional[BaseStation]:
        for bs in self.base_stations:
            if bs.cell_id == cell_id:
                return bs
        return None


_TOP_KEYS = {"area", "seed", "sensors", "points", "base_stations"}
_AREA_KEYS = {"width_m", "height_m"}
_SENSOR_KEYS = {"id", "x", "y", "speed_kmh"}
_POINT_KEYS = {"id", "x", "y"}
_POINT_OPTIONAL = {"target_bs"}
_BS_KEYS = {"id", "x", "y", "cell_id", "antenna"}


def _check_keys(obj: Any, required: set[str], where: str, optional: set[str] = frozenset()) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    missing = required - obj.keys()
    if missing:
        raise SchemaError(f"{where}: missing field(s) {', '.join(sorted(missing))}")
    unknown = obj.keys() - required - optional
    if unknown:
        raise SchemaError(f"{where}: unknown key(s) {', '.join(sorted(unknown))}")


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {value!r}")
    number = float(value)
    if not math.isfinite(number):
        raise SchemaError(f"{where}: expected a finite number, got {value!r}")
    return number


def _integer(value: Any, where: str, lo: int = 0, hi: int = U64_MAX) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}: expected an integer, got {value!r}")
    if not lo <= value <= hi:
        raise SchemaError(f"{where}: {value} outside [{lo}, {hi}]")
    return value


def _list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected a list")
    return value


def campaign_from_dict(doc: Any) -> Campaign:
    """Validate a decoded configuration document and build a Campaign."""
    _check_keys(doc, _TOP_KEYS, "campaign")
    _check_keys(doc["area"], _AREA_KEYS, "area")
    width = _number(doc["area"]["width_m"], "area.width_m")
    height = _number(doc["area"]["height_m"], "area.height_m")
    if width <= 0 or height <= 0:
        raise SchemaError(f"area must have positive size, got {width}x{height}")
    seed = _integer(doc["seed"], "seed")

    def position(item: dict, where: str) -> Point2D:
        p = Point2D(_number(item["x"], f"{where}.x"), _number(item["y"], f"{where}.y"))
        if not (0.0 <= p.x <= width and 0.0 <= p.y <= height):
            raise BoundsError(f"{where} at {p} outside {width:g}x{height:g} m area")
        return p

    stations: list[BaseStation] = []
    for i, item in enumerate(_list(doc["base_stations"], "base_stations")):
        where = f"base_stations[{i}]"
        _check_keys(item, _BS_KEYS, where)
        antenna = item["antenna"]
        if not isinstance(antenna, str):
            raise SchemaError(f"{where}.antenna: expected a string")
        try:
            antenna.encode("utf-8")
        except UnicodeEncodeError:
            raise SchemaError(f"{where}.antenna: lone surrogate in string")
        stations.append(BaseStation(
            id=_integer(item["id"], f"{where}.id"),
            position=position(item, where),
            cell_id=_integer(item["cell_id"], f"{where}.cell_id", hi=2**32 - 1),
            static_info=antenna,
        ))
    _unique([bs.id for bs in stations], "base station id")
    _unique([bs.cell_id for bs in stations], "cell_id")
    station_ids = {bs.id for bs in stations}

    sensors: list[SensorNode] = []
    for i, item in enumerate(_list(doc["sensors"], "sensors")):
        where = f"sensors[{i}]"
        _check_keys(item, _SENSOR_KEYS, where)
        speed_kmh = _number(item["speed_kmh"], f"{where}.speed_kmh")
        if speed_kmh <= 0:
            raise SchemaError(f"{where}.speed_kmh must be positive, got {speed_kmh}")
        sensors.append(SensorNode(
            id=_integer(item["id"], f"{where}.id", hi=2**32 - 1),
            position=position(item, where),
            speed=kmh_to_ms(speed_kmh),
        ))
    if not sensors:
        raise SchemaError("campaign needs at least one sensor")
    _unique([s.id for s in sensors], "sensor id")

    points: list[MeasurementPoint] = []
    for i, item in enumerate(_list(doc["points"], "points")):
        where = f"points[{i}]"
        _check_keys(item, _POINT_KEYS, where, optional=_POINT_OPTIONAL)
        target = item.get("target_bs")
        if target is not None:
            target = _integer(target, f"{where}.target_bs")
            if target not in station_ids:
                raise SchemaError(f"{where}.target_bs: no base station with id {target}")
        points.append(MeasurementPoint(
            id=_integer(item["id"], f"{where}.id", hi=2**32 - 1),
            position=position(item, where),
            target_bs=target,
        ))
    _unique([p.id for p in points], "measurement point id")

    return Campaign(
        area=(width, height),
        sensors=tuple(sensors),
        points=tuple(points),
        base_stations=tuple(stations),
        seed=seed,
    )


def _unique(ids: list[int], what: str) -> None:
    seen: set[int] = set()
    for value in ids:
        if value in seen:
            raise DuplicateId(f"duplicate {what} {value}")
        seen.add(value)


def points_from_list(items: Any) -> list[MeasurementPoint]:
    """Bare ``[{id,x,y}]`` point list, outside any campaign area."""
    points = []
    for i, item in enumerate(_list(items, "points")):
        where = f"points[{i}]"
        _check_keys(item, _POINT_KEYS, where, optional=_POINT_OPTIONAL)
        target = item.get("target_bs")
        points.append(MeasurementPoint(
            id=_integer(item["id"], f"{where}.id", hi=2**32 - 1),
            position=Point2D(_number(item["x"], f"{where}.x"), _number(item["y"], f"{where}.y")),
            target_bs=None if target is None else _integer(target, f"{where}.target_bs"),
        ))
    _unique([p.id for p in points], "measurement point id")
    return points


def load_campaign(text: Union[str, bytes]) -> Campaign:
    """Parse and validate a JSON campaign document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON at offset {e.pos}: {e.msg}")
    return campaign_from_dict(doc)


def read_campaign(path: Union[str, Path]) -> Campaign:
    return load_campaign(Path(path).read_text(encoding="utf-8"))


def campaign_to_dict(c: Campaign) -> dict:
    points = []
    for p in c.points:
        item = {"id": p.id, "x": p.position.x, "y": p.position.y}
        if p.target_bs is not None:
            item["target_bs"] = p.target_bs
        points.append(item)
    return {
        "area": {"width_m": c.width, "height_m": c.height},
        "seed": c.seed,
        "sensors": [
            {"id": s.id, "x": s.position.x, "y": s.position.y, "speed_kmh": ms_to_kmh(s.speed)}
            for s in c.sensors
        ],
        "points": points,
        "base_stations": [
            {"id": b.id, "x": b.position.x, "y": b.position.y, "cell_id": b.cell_id, "antenna": b.static_info}
            for b in c.base_stations
        ],
    }


def dump_campaign(c: Campaign) -> str:
    return json.dumps(campaign_to_dict(c), indent=2) + "\n"
