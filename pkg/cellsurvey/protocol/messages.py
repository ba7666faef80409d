"""
Message types exchanged between the central node and the mobile sensors.

Central -> sensor: START, STOP, MOVE_TO, GET_MEASURE, VECTOR, plus the
CELL_INFO_REPLY answer. Sensor -> central: READY_TO_SEND, CELL_INFO, the
periodic POSITION report, MEASURE_DATA. Either side may ACK. Every envelope
the central sends is stamped with the base station closest to the addressee.
"""
from dataclasses import dataclass
from typing import ClassVar, Optional, Union

from cellsurvey.core.campaign import BaseStation
from cellsurvey.core.errors import ProtocolError
from cellsurvey.core.geometry import Point2D
from cellsurvey.core.result import MeasurementRecord

U32_MAX = 2**32 - 1
U64_MAX = 2**64 - 1


@dataclass(frozen=True, slots=True)
class Sender:
    sensor_id: Optional[int] = None  # None = central node

    @property
    def is_central(self) -> bool:
        return self.sensor_id is None

    @property
    def wire(self) -> str:
        return "central" if self.sensor_id is None else f"sensor/{self.sensor_id}"

    def __str__(self) -> str:
        return self.wire


CENTRAL = Sender()


def sensor(sensor_id: int) -> Sender:
    return Sender(sensor_id)


@dataclass(frozen=True, slots=True)
class ClosestBs:
    position: Point2D
    cell_id: int

    @classmethod
    def of(cls, bs: BaseStation) -> "ClosestBs":
        return cls(bs.position, bs.cell_id)


@dataclass(frozen=True, slots=True)
class Waypoint:
    point_id: int
    position: Point2D


# Kinds

@dataclass(frozen=True, slots=True)
class Start:
    KIND: ClassVar[str] = "START"


@dataclass(frozen=True, slots=True)
class Stop:
    KIND: ClassVar[str] = "STOP"


@dataclass(frozen=True, slots=True)
class MoveTo:
    KIND: ClassVar[str] = "MOVE_TO"
    target: Waypoint


@dataclass(frozen=True, slots=True)
class GetMeasure:
    """since=None asks for every record; otherwise records with seq > since."""
    KIND: ClassVar[str] = "GET_MEASURE"
    since: Optional[int] = None

    def __post_init__(self):
        if self.since is not None and self.since < 0:
            raise ProtocolError(f"GET_MEASURE since must be >= 0, got {self.since}")

    @property
    def complete(self) -> bool:
        return self.since is None


@dataclass(frozen=True, slots=True)
class Vector:
    KIND: ClassVar[str] = "VECTOR"
    order: tuple[Waypoint, ...]

    def __post_init__(self):
        if not self.order:
            raise ProtocolError("VECTOR needs at least one position")


@dataclass(frozen=True, slots=True)
class ReadyToSend:
    KIND: ClassVar[str] = "READY_TO_SEND"
    count: int


@dataclass(frozen=True, slots=True)
class CellInfo:
    KIND: ClassVar[str] = "CELL_INFO"
    cell_id: int


@dataclass(frozen=True, slots=True)
class Position:
    KIND: ClassVar[str] = "POSITION"
    at: Point2D
    time: float


@dataclass(frozen=True, slots=True)
class Ack:
    KIND: ClassVar[str] = "ACK"
    of: int


@dataclass(frozen=True, slots=True)
class MeasureData:
    KIND: ClassVar[str] = "MEASURE_DATA"
    records: tuple[MeasurementRecord, ...]


@dataclass(frozen=True, slots=True)
class CellInfoReply:
    KIND: ClassVar[str] = "CELL_INFO_REPLY"
    station: BaseStation


MessageKind = Union[Start, Stop, MoveTo, GetMeasure, Vector, ReadyToSend,
                    CellInfo, Position, Ack, MeasureData, CellInfoReply]

CENTRAL_KINDS = frozenset({"START", "STOP", "MOVE_TO", "GET_MEASURE", "VECTOR", "CELL_INFO_REPLY", "ACK"})
SENSOR_KINDS = frozenset({"READY_TO_SEND", "CELL_INFO", "POSITION", "ACK", "MEASURE_DATA"})


@dataclass(frozen=True, slots=True)
class MessageEnvelope:
    msg_id: int
    sender: Sender
    kind: MessageKind
    closest_bs: Optional[ClosestBs] = None

    def __post_init__(self):
        if not 0 <= self.msg_id <= U64_MAX:
            raise ProtocolError(f"msg_id {self.msg_id} is not a u64")
        if self.sender.sensor_id is not None and not 0 <= self.sender.sensor_id <= U32_MAX:
            raise ProtocolError(f"sensor id {self.sender.sensor_id} is not a u32")
        if self.sender.is_central:
            if self.closest_bs is None:
                raise ProtocolError(f"central {self.kind.KIND} without closest base station")
            if self.kind.KIND not in CENTRAL_KINDS:
                raise ProtocolError(f"central node cannot send {self.kind.KIND}")
        else:
            if self.closest_bs is not None:
                raise ProtocolError(f"sensor {self.kind.KIND} must not carry a closest base station")
            if self.kind.KIND not in SENSOR_KINDS:
                raise ProtocolError(f"sensor node cannot send {self.kind.KIND}")

    @property
    def key(self) -> tuple[Optional[int], int]:
        return (self.sender.sensor_id, self.msg_id)


@dataclass(frozen=True, slots=True)
class DedupWindow:
    """The last ``size`` (sender, msg_id) keys seen, oldest first."""
    seen: tuple[tuple[Optional[int], int], ...] = ()
    size: int = 1024

    def __contains__(self, key) -> bool:
        return key in self.seen

    def admit(self, key: tuple[Optional[int], int]) -> tuple[bool, "DedupWindow"]:
        """(True, grown window) for a new key; (False, self) for a duplicate."""
        if key in self.seen:
            return False, self
        seen = self.seen + (key,)
        if len(seen) > self.size:
            seen = seen[-self.size:]
        return True, DedupWindow(seen, self.size)
