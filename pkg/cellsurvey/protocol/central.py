"""
Central node: partitions the work, plans routes, follows the sensors and
collects their measurements.

``central_step`` is a pure transition ``(state, event) -> (state, outbound)``.
The state is never mutated; every change produces a new CentralState.
"""
from dataclasses import dataclass, field, replace
from typing import Mapping

from cellsurvey.core.campaign import BaseStation, Campaign, MeasurementPoint, SensorNode
from cellsurvey.core.errors import EmptyBsTable, PlanningError, ProtocolError, UnknownSensor
from cellsurvey.core.geometry import Point2D
from cellsurvey.core.result import MeasurementRecord
from cellsurvey.core.utils import derive_seed
from cellsurvey.planning.dominance import assign_dominances, points_by_id
from cellsurvey.planning.genetic import ConvergenceTrace, GAParams, Route, optimize_route
from cellsurvey.protocol.events import CentralEvent, Inbound, OperatorCommand, Tick
from cellsurvey.protocol.messages import (
    CENTRAL, Ack, CellInfo, CellInfoReply, ClosestBs, DedupWindow, GetMeasure, MeasureData,
    MessageEnvelope, MessageKind, MoveTo, Position, ReadyToSend, Start, Stop, Vector, Waypoint,
)
from cellsurvey.telemetry.modem import serving_station


@dataclass(frozen=True, slots=True)
class Outbound:
    to: int  # sensor id
    envelope: MessageEnvelope


@dataclass(frozen=True, slots=True)
class SensorView:
    """What the central node knows about one sensor."""
    sensor_id: int
    position: Point2D          # last reported
    speed: float
    closest_bs: ClosestBs
    assigned: tuple[int, ...] = ()
    delivered: frozenset[int] = frozenset()
    last_seq: int = 0
    stopped: bool = False

    @property
    def finished(self) -> bool:
        return bool(self.assigned) and set(self.assigned) <= self.delivered


@dataclass(frozen=True, slots=True)
class CentralState:
    stations: tuple[BaseStation, ...]
    sensors: Mapping[int, SensorView]
    points: tuple[MeasurementPoint, ...]
    ga: GAParams = GAParams()
    seed: int = 0
    next_msg_id: int = 1
    window: DedupWindow = DedupWindow()
    records: tuple[MeasurementRecord, ...] = ()
    routes: Mapping[int, Route] = field(default_factory=dict)
    traces: Mapping[int, ConvergenceTrace] = field(default_factory=dict)
    clock: float = 0.0

    def view(self, sensor_id: int) -> SensorView:
        try:
            return self.sensors[sensor_id]
        except KeyError:
            raise UnknownSensor(f"sensor {sensor_id} is not registered")

    @property
    def complete(self) -> bool:
        return all(v.stopped for v in self.sensors.values())


def closest_bs(position: Point2D, stations: tuple[BaseStation, ...]) -> ClosestBs:
    """Nearest base station to ``position``; ties go to the lowest cell id."""
    return ClosestBs.of(serving_station(position, stations))


def central_from_campaign(c: Campaign, ga: GAParams = GAParams()) -> CentralState:
    """
    Initial central state: every campaign sensor registered at its start position.

    Raises:
        EmptyBsTable: the campaign has no base stations to stamp messages with
    """
    if not c.base_stations:
        raise EmptyBsTable("central node needs at least one base station")
    views = {
        s.id: SensorView(s.id, s.position, s.speed, closest_bs(s.position, c.base_stations))
        for s in sorted(c.sensors, key=lambda s: s.id)
    }
    return CentralState(stations=c.base_stations, sensors=views, points=c.points, ga=ga, seed=c.seed)


class _Outbox:
    """Collects outbound messages while threading the message-id counter."""

    def __init__(self, state: CentralState):
        self.state = state
        self.messages: list[Outbound] = []

    def send(self, sensor_id: int, kind: MessageKind) -> None:
        view = self.state.sensors[sensor_id]
        env = MessageEnvelope(self.state.next_msg_id, CENTRAL, kind, view.closest_bs)
        self.state = replace(self.state, next_msg_id=self.state.next_msg_id + 1)
        self.messages.append(Outbound(sensor_id, env))

    def update(self, view: SensorView) -> None:
        self.state = replace(self.state, sensors={**self.state.sensors, view.sensor_id: view})

    def result(self) -> tuple[CentralState, list[Outbound]]:
        return self.state, self.messages


def central_step(state: CentralState, event: CentralEvent) -> tuple[CentralState, list[Outbound]]:
    """
    Apply one event to the central node.

    Raises:
        UnknownSensor: a message from, or a command about, an unregistered sensor
    """
    if isinstance(event, Tick):
        return replace(state, clock=max(state.clock, event.time)), []
    if isinstance(event, OperatorCommand):
        return _operator(state, event)
    if isinstance(event, Inbound):
        return _inbound(state, event.envelope)
    raise TypeError(f"not a central event: {event!r}")


def _inbound(state: CentralState, env: MessageEnvelope) -> tuple[CentralState, list[Outbound]]:
    if env.sender.is_central:
        raise ProtocolError("central node received its own message")
    view = state.view(env.sender.sensor_id)
    fresh, window = state.window.admit(env.key)
    if not fresh:
        return state, []
    box = _Outbox(replace(state, window=window))
    kind = env.kind

    if isinstance(kind, Position):
        box.update(replace(view, position=kind.at, closest_bs=closest_bs(kind.at, state.stations)))
        box.state = replace(box.state, clock=max(box.state.clock, kind.time))
    elif isinstance(kind, ReadyToSend):
        box.send(view.sensor_id, GetMeasure(view.last_seq if view.last_seq else None))
    elif isinstance(kind, MeasureData):
        new = tuple(r for r in sorted(kind.records, key=lambda r: r.seq) if r.seq > view.last_seq)
        if new:
            view = replace(
                view,
                delivered=view.delivered | {r.point_id for r in new},
                last_seq=new[-1].seq,
            )
            box.update(view)
            box.state = replace(box.state, records=box.state.records + new)
        if view.finished and not view.stopped:
            box.update(replace(view, stopped=True))
            box.send(view.sensor_id, Stop())
    elif isinstance(kind, CellInfo):
        station = next((bs for bs in state.stations if bs.cell_id == kind.cell_id), None)
        if station is not None:
            box.send(view.sensor_id, CellInfoReply(station))
    elif isinstance(kind, Ack):
        pass
    return box.result()


def _operator(state: CentralState, cmd: OperatorCommand) -> tuple[CentralState, list[Outbound]]:
    box = _Outbox(state)
    if cmd.name == "start":
        for sid in sorted(state.sensors):
            box.send(sid, Start())
    elif cmd.name == "stop":
        for sid in sorted(state.sensors):
            view = box.state.sensors[sid]
            if not view.stopped:
                box.update(replace(view, stopped=True))
                box.send(sid, Stop())
    elif cmd.name == "move":
        view = state.view(cmd.sensor_id)
        point = points_by_id(state.points).get(cmd.point_id)
        if point is None:
            raise PlanningError(f"no measurement point {cmd.point_id}")
        box.update(replace(view, assigned=view.assigned + (point.id,)))
        box.send(view.sensor_id, MoveTo(Waypoint(point.id, point.position)))
    elif cmd.name == "collect":
        view = state.view(cmd.sensor_id)
        box.send(view.sensor_id, GetMeasure(cmd.since))
    elif cmd.name == "plan":
        _plan(box)
    return box.result()


def _plan(box: _Outbox) -> None:
    """Dominance partition from last-known positions, then one GA route per sensor."""
    state = box.state
    sensors = [SensorNode(v.sensor_id, v.position, v.speed) for v in state.sensors.values()]
    assignment = assign_dominances(sensors, state.points)
    by_id = points_by_id(state.points)
    routes = dict(state.routes)
    traces = dict(state.traces)

    for sid in sorted(state.sensors):
        view = box.state.sensors[sid]
        owned = [by_id[pid] for pid in assignment.points_of(sid)]
        if not owned:
            if not view.stopped:
                box.update(replace(view, stopped=True))
                box.send(sid, Stop())
            continue
        params = replace(state.ga, seed=derive_seed(state.seed, sid))
        route, trace = optimize_route(view.position, owned, params, sensor_id=sid)
        routes[sid] = route
        traces[sid] = trace
        box.update(replace(view, assigned=route.ids))
        box.send(sid, Vector(tuple(Waypoint(p.id, p.position) for p in route.points)))

    box.state = replace(box.state, routes=routes, traces=traces)


def pending_sensors(state: CentralState) -> list[int]:
    """Sensors whose conversation has not been closed with STOP."""
    return [sid for sid, v in sorted(state.sensors.items()) if not v.stopped]



def assigned_points(state: CentralState) -> dict[int, list[int]]:
    """Point ids each sensor was told to measure, in visiting order."""
    return {sid: list(v.assigned) for sid, v in sorted(state.sensors.items())}
