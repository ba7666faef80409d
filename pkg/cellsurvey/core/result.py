from dataclasses import dataclass, field, asdict
from typing import Optional

from cellsurvey.core.errors import OutOfRange, ParseError
from cellsurvey.core.geometry import Point2D

RSSI_MIN_DBM = -113
RSSI_MAX_DBM = -51


@dataclass(frozen=True, slots=True)
class CellMeasurement:
    """One sample of serving-cell identity and radio quality."""
    cell_id: int
    timing_advance: int
    mcc: int
    mnc: int
    lac: int
    rssi_dbm: Optional[int]      # None = not known
    ber_pct: Optional[float]     # None = not known
    bcc: int
    btcc: int
    ncc: int
    rssi_delta: Optional[float] = None
    ber_delta: Optional[float] = None

    def __post_init__(self):
        if self.timing_advance < 0:
            raise OutOfRange(f"timing advance {self.timing_advance} < 0")
        if self.rssi_dbm is not None and not RSSI_MIN_DBM <= self.rssi_dbm <= RSSI_MAX_DBM:
            raise OutOfRange(f"rssi {self.rssi_dbm} dBm outside [{RSSI_MIN_DBM}, {RSSI_MAX_DBM}]")
        if self.ber_pct is not None and not 0.0 <= self.ber_pct <= 100.0:
            raise OutOfRange(f"ber {self.ber_pct}% outside [0, 100]")
        for name in ("bcc", "btcc", "ncc"):
            value = getattr(self, name)
            if not 0 <= value <= 7:
                raise OutOfRange(f"{name} {value} outside 0..7")

    def asdict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "CellMeasurement":
        return cls(**data)


@dataclass(frozen=True, slots=True)
class MeasurementRecord:
    seq: int                 # per-sensor sequence number, starting at 1
    point_id: int
    position: Point2D
    time: float
    cell: CellMeasurement

    def asdict(self) -> dict:
        return {
            "seq": self.seq,
            "point_id": self.point_id,
            "x": self.position.x,
            "y": self.position.y,
            "time": self.time,
            "cell": self.cell.asdict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MeasurementRecord":
        return cls(
            seq=int(data["seq"]),
            point_id=int(data["point_id"]),
            position=Point2D(float(data["x"]), float(data["y"])),
            time=float(data["time"]),
            cell=CellMeasurement.from_dict(data["cell"]),
        )


@dataclass(frozen=True, slots=True)
class TraceEntry:
    """One wire message as the central node saw it: sent by it, or delivered to it."""
    time: float
    line: str
    to: Optional[int] = None  # addressee of a central message; not on the wire

    def render(self) -> str:
        return f"{self.time!r} {self.line}"

    @classmethod
    def parse(cls, text: str) -> "TraceEntry":
        """Inverse of ``render``; the addressee is not recoverable from the line."""
        stamp, sep, line = text.rstrip("\n").partition(" ")
        if not sep:
            raise ParseError(0, "trace line without a time prefix")
        try:
            time = float(stamp)
        except ValueError:
            raise ParseError(0, f"bad time prefix {stamp!r}")
        return cls(time, line)


@dataclass
class CampaignReport:
    mode: str
    seed: int
    sensor_count: int
    point_count: int
    per_sensor_time: dict[int, float] = field(default_factory=dict)
    total_distance: dict[int, float] = field(default_factory=dict)
    assigned: dict[int, list[int]] = field(default_factory=dict)
    convergence: dict[int, list[float]] = field(default_factory=dict)
    records: list[MeasurementRecord] = field(default_factory=list)
    trace: list[TraceEntry] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def overall_time(self) -> float:
        """Campaign duration: the slowest sensor decides."""
        return max(self.per_sensor_time.values(), default=0.0)

    @property
    def complete(self) -> bool:
        return len(self.records) == self.point_count

    @property
    def sum_of_sensor_times(self) -> float:
        return sum(self.per_sensor_time.values())

    def asdict(self) -> dict:
        # JSON object keys must be strings; keep sensor order stable
        return {
            "mode": self.mode,
            "seed": self.seed,
            "sensor_count": self.sensor_count,
            "point_count": self.point_count,
            "overall_time_s": self.overall_time,
            "per_sensor_time_s": {str(k): v for k, v in sorted(self.per_sensor_time.items())},
            "total_distance_m": {str(k): v for k, v in sorted(self.total_distance.items())},
            "assigned": {str(k): v for k, v in sorted(self.assigned.items())},
            "convergence": {str(k): v for k, v in sorted(self.convergence.items())},
            "records": [r.asdict() for r in self.records],
            "trace": [t.render() for t in self.trace],
            "notes": list(self.notes),
        }
