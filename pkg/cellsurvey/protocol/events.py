from dataclasses import dataclass
from typing import Optional, Union

from cellsurvey.core.geometry import Point2D
from cellsurvey.core.result import CellMeasurement
from cellsurvey.protocol.messages import MessageEnvelope

OPERATOR_COMMANDS = ("start", "plan", "move", "collect", "stop")


@dataclass(frozen=True, slots=True)
class Inbound:
    envelope: MessageEnvelope


@dataclass(frozen=True, slots=True)
class Tick:
    """Timer expiry. Sensors report ``position`` (where the platform says they are)."""
    time: float
    position: Optional[Point2D] = None


@dataclass(frozen=True, slots=True)
class OperatorCommand:
    name: str
    sensor_id: Optional[int] = None   # move / collect
    point_id: Optional[int] = None    # move
    since: Optional[int] = None       # collect; None = COMPLETE

    def __post_init__(self):
        if self.name not in OPERATOR_COMMANDS:
            raise ValueError(f"unknown operator command {self.name!r}")
        if self.name in ("move", "collect") and self.sensor_id is None:
            raise ValueError(f"{self.name} needs a sensor id")
        if self.name == "move" and self.point_id is None:
            raise ValueError("move needs a point id")


@dataclass(frozen=True, slots=True)
class MeasurementComplete:
    time: float
    position: Point2D
    cell: CellMeasurement


CentralEvent = Union[Inbound, Tick, OperatorCommand]
SensorEvent = Union[Inbound, Tick, MeasurementComplete]
