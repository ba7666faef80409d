"""
Mobile sensor node.

IDLE until START, then MEASURING: it follows the plan set by MOVE_TO or
VECTOR, records one measurement per waypoint, reports its position on every
timer tick and hands records over on GET_MEASURE. Every central message is
acknowledged. A repeated (sender, msg_id) is acknowledged again and
otherwise ignored, so duplicates never change the store.
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping, Optional

from cellsurvey.core.campaign import BaseStation
from cellsurvey.core.geometry import Point2D
from cellsurvey.core.result import MeasurementRecord
from cellsurvey.protocol.events import Inbound, MeasurementComplete, SensorEvent, Tick
from cellsurvey.protocol.messages import (
    Ack, CellInfo, CellInfoReply, ClosestBs, DedupWindow, GetMeasure, MeasureData,
    MessageEnvelope, MessageKind, MoveTo, Position, ReadyToSend, Sender, Start, Stop, Vector, Waypoint,
)


class SensorMode(str, Enum):
    IDLE = "IDLE"
    MEASURING = "MEASURING"


@dataclass(frozen=True, slots=True)
class SensorState:
    sensor_id: int
    position: Point2D
    mode: SensorMode = SensorMode.IDLE
    plan: tuple[Waypoint, ...] = ()
    plan_index: int = 0
    store: tuple[MeasurementRecord, ...] = ()
    next_msg_id: int = 1
    window: DedupWindow = DedupWindow()
    closest_bs: Optional[ClosestBs] = None
    known_cells: Mapping[int, BaseStation] = field(default_factory=dict)
    requested_cells: frozenset[int] = frozenset()
    request_cell_info: bool = True
    clock: float = 0.0

    @property
    def target(self) -> Optional[Waypoint]:
        """Next waypoint to reach, if the sensor is measuring and has one."""
        if self.mode is SensorMode.MEASURING and self.plan_index < len(self.plan):
            return self.plan[self.plan_index]
        return None

    @property
    def next_seq(self) -> int:
        return len(self.store) + 1

    def records_since(self, since: Optional[int]) -> tuple[MeasurementRecord, ...]:
        if since is None:
            return self.store
        return tuple(r for r in self.store if r.seq > since)


def sensor_step(state: SensorState, event: SensorEvent) -> tuple[SensorState, list[MessageEnvelope]]:
    """Apply one event to a sensor; outputs are addressed to the central node."""
    if isinstance(event, Inbound):
        return _inbound(state, event.envelope)
    if isinstance(event, Tick):
        return _tick(state, event)
    if isinstance(event, MeasurementComplete):
        return _measured(state, event)
    raise TypeError(f"not a sensor event: {event!r}")


def _emit(state: SensorState, out: list[MessageEnvelope], kind: MessageKind) -> SensorState:
    out.append(MessageEnvelope(state.next_msg_id, Sender(state.sensor_id), kind))
    return replace(state, next_msg_id=state.next_msg_id + 1)


def _inbound(state: SensorState, env: MessageEnvelope) -> tuple[SensorState, list[MessageEnvelope]]:
    out: list[MessageEnvelope] = []
    if not env.sender.is_central:
        return state, out

    kind = env.kind
    if isinstance(kind, Ack):
        return state, out

    fresh, window = state.window.admit(env.key)
    state = _emit(state, out, Ack(env.msg_id))
    if not fresh:
        return state, out
    state = replace(state, window=window, closest_bs=env.closest_bs)

    measuring = state.mode is SensorMode.MEASURING
    if isinstance(kind, Start):
        state = replace(state, mode=SensorMode.MEASURING)
    elif isinstance(kind, Stop):
        state = replace(state, mode=SensorMode.IDLE, plan=(), plan_index=0)
    elif isinstance(kind, MoveTo) and measuring:
        state = replace(state, plan=(kind.target,), plan_index=0)
    elif isinstance(kind, Vector) and measuring:
        state = replace(state, plan=kind.order, plan_index=0)
    elif isinstance(kind, GetMeasure):
        state = _emit(state, out, MeasureData(state.records_since(kind.since)))
    elif isinstance(kind, CellInfoReply):
        cells = {**state.known_cells, kind.station.cell_id: kind.station}
        state = replace(state, known_cells=cells)
    return state, out


def _tick(state: SensorState, tick: Tick) -> tuple[SensorState, list[MessageEnvelope]]:
    out: list[MessageEnvelope] = []
    position = tick.position if tick.position is not None else state.position
    state = replace(state, position=position, clock=max(state.clock, tick.time))
    if state.mode is SensorMode.MEASURING:
        state = _emit(state, out, Position(position, tick.time))
    return state, out


def _measured(state: SensorState, done: MeasurementComplete) -> tuple[SensorState, list[MessageEnvelope]]:
    out: list[MessageEnvelope] = []
    target = state.target
    if target is None:
        return state, out

    record = MeasurementRecord(
        seq=state.next_seq,
        point_id=target.point_id,
        position=done.position,
        time=done.time,
        cell=done.cell,
    )
    state = replace(
        state,
        store=state.store + (record,),
        plan_index=state.plan_index + 1,
        position=done.position,
        clock=max(state.clock, done.time),
    )

    cid = done.cell.cell_id
    if state.request_cell_info and cid not in state.known_cells and cid not in state.requested_cells:
        state = replace(state, requested_cells=state.requested_cells | {cid})
        state = _emit(state, out, CellInfo(cid))
    if state.plan_index >= len(state.plan):
        state = _emit(state, out, ReadyToSend(len(state.store)))
    return state, out
