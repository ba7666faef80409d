"""
Discrete-event campaign simulation.

The central node and every sensor run their protocol state machines; the
simulator only moves bytes between them (after a fixed latency), moves the
sensors along their routes at constant speed and asks the simulated modem
for a reading at each point. Every message crosses the wire codec.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from cellsurvey.core.campaign import Campaign
from cellsurvey.core.geometry import Point2D, euclidean_distance
from cellsurvey.core.result import CampaignReport, CellMeasurement, TraceEntry
from cellsurvey.core.utils import MODEM_STREAM, derive_seed
from cellsurvey.planning.genetic import GAParams
from cellsurvey.protocol.central import Outbound, assigned_points, central_from_campaign, central_step, pending_sensors
from cellsurvey.protocol.codec import decode, encode
from cellsurvey.protocol.events import CentralEvent, Inbound, MeasurementComplete, OperatorCommand, SensorEvent, Tick
from cellsurvey.protocol.messages import MessageEnvelope, Waypoint
from cellsurvey.protocol.sensor import SensorMode, SensorState, sensor_step
from cellsurvey.sim.engine import EventKind, FutureEventList, SimEvent
from cellsurvey.telemetry.at import parse_cell_info
from cellsurvey.telemetry.ingest import next_sample
from cellsurvey.telemetry.modem import ModemProfile, simulated_modem


class RunMode(str, Enum):
    K_AS_CONFIGURED = "k"
    FORCE_SINGLE_SENSOR = "single"


@dataclass(frozen=True, slots=True)
class SimConfig:
    dwell_s: float = 0.0              # time spent measuring at each point
    latency_s: float = 0.0            # one-way message delay
    position_period_s: float = 10.0
    cell_info_requests: bool = True
    duplicate_messages: bool = False  # deliver every message twice
    record_trace: bool = True
    modem: ModemProfile = ModemProfile()

    def __post_init__(self):
        if self.dwell_s < 0 or self.latency_s < 0:
            raise ValueError("dwell and latency must be >= 0")
        if not self.position_period_s > 0:
            raise ValueError(f"position period must be positive, got {self.position_period_s}")


@dataclass
class _Motion:
    """Where a sensor physically is; the protocol state only knows what it was told."""
    position: Point2D
    speed: float
    leg_to: Optional[Waypoint] = None
    leg_from: Optional[Point2D] = None
    leg_start: float = 0.0
    leg_end: float = 0.0
    busy: bool = False
    timer_running: bool = False
    started: Optional[float] = None
    finished: Optional[float] = None
    distance: float = 0.0
    last_cell: Optional[CellMeasurement] = field(default=None, repr=False)

    def position_at(self, t: float) -> Point2D:
        if self.leg_to is None or self.leg_from is None or self.leg_end <= self.leg_start:
            return self.position
        f = min(max((t - self.leg_start) / (self.leg_end - self.leg_start), 0.0), 1.0)
        a, b = self.leg_from, self.leg_to.position
        return Point2D(a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f)


class CampaignSimulator:
    def __init__(self, campaign: Campaign, ga: GAParams = GAParams(),
                 config: SimConfig = SimConfig(), log: Optional[logging.Logger] = None):
        self.campaign = campaign
        self.config = config
        self.log = log or logging.getLogger(__name__)
        self.fel = FutureEventList()
        self.central = central_from_campaign(campaign, ga)
        self.sensors: dict[int, SensorState] = {
            s.id: SensorState(s.id, s.position, request_cell_info=config.cell_info_requests)
            for s in campaign.sensors
        }
        self.motion: dict[int, _Motion] = {s.id: _Motion(s.position, s.speed) for s in campaign.sensors}
        self.trace: list[TraceEntry] = []

    # Wiring

    def _record(self, env: MessageEnvelope, to: Optional[int] = None) -> None:
        if self.config.record_trace:
            self.trace.append(TraceEntry(self.fel.clock, encode(env).decode("utf-8").rstrip("\n"), to))

    def _transmit(self, node: Optional[int], env: MessageEnvelope) -> None:
        copies = 2 if self.config.duplicate_messages else 1
        data = encode(env)
        for _ in range(copies):
            self.fel.schedule(self.config.latency_s, EventKind.DELIVERY, node, data)

    def _central(self, event: CentralEvent) -> None:
        self.central, out = central_step(self.central, event)
        for message in out:
            self._send_to_sensor(message)

    def _send_to_sensor(self, message: Outbound) -> None:
        self._record(message.envelope, message.to)
        self._transmit(message.to, message.envelope)

    def _sensor(self, sensor_id: int, event: SensorEvent) -> None:
        self.sensors[sensor_id], out = sensor_step(self.sensors[sensor_id], event)
        for env in out:
            self._transmit(None, env)
        self._drive(sensor_id)

    def _drive(self, sensor_id: int) -> None:
        """Start the position timer and the next leg when the protocol state asks for them."""
        state = self.sensors[sensor_id]
        motion = self.motion[sensor_id]
        if state.mode is SensorMode.MEASURING and not motion.timer_running:
            motion.timer_running = True
            self.fel.schedule(self.config.position_period_s, EventKind.POSITION_TIMER, sensor_id)

        target = state.target
        if target is None or motion.busy:
            return
        now = self.fel.clock
        if motion.started is None:
            motion.started = now
        travel = euclidean_distance(motion.position, target.position) / motion.speed
        motion.busy = True
        motion.leg_to, motion.leg_from = target, motion.position
        motion.leg_start, motion.leg_end = now, now + travel
        self.fel.schedule(travel, EventKind.ARRIVAL, sensor_id, target)

    # Event handlers

    def _on_delivery(self, event: SimEvent) -> None:
        env = decode(event.payload)
        if event.node is None:
            self._record(env)
            self._central(Inbound(env))
        else:
            self._sensor(event.node, Inbound(env))

    def _on_arrival(self, event: SimEvent) -> None:
        motion = self.motion[event.node]
        target: Waypoint = event.payload
        motion.distance += euclidean_distance(motion.position, target.position)
        motion.position = target.position
        motion.leg_to = motion.leg_from = None
        self.fel.schedule(self.config.dwell_s, EventKind.MEASURED, event.node, target)

    def _on_measured(self, event: SimEvent) -> None:
        sensor_id = event.node
        motion = self.motion[sensor_id]
        target: Waypoint = event.payload
        motion.busy = False
        if self.sensors[sensor_id].target != target:
            # plan changed while travelling; nothing to record here
            self._drive(sensor_id)
            return

        seed = derive_seed(self.campaign.seed, MODEM_STREAM, sensor_id, target.point_id)
        block = simulated_modem(motion.position, self.campaign.base_stations, seed, self.config.modem)
        cell = next_sample(motion.last_cell, parse_cell_info(block))
        motion.last_cell = cell
        motion.finished = self.fel.clock
        self.log.debug(f"sensor {sensor_id} measured point {target.point_id} at t={self.fel.clock:.1f}s: "
                       f"cell {cell.cell_id}, {cell.rssi_dbm} dBm")
        self._sensor(sensor_id, MeasurementComplete(self.fel.clock, motion.position, cell))

    def _on_timer(self, event: SimEvent) -> None:
        sensor_id = event.node
        motion = self.motion[sensor_id]
        if self.sensors[sensor_id].mode is not SensorMode.MEASURING:
            motion.timer_running = False
            return
        self._sensor(sensor_id, Tick(self.fel.clock, motion.position_at(self.fel.clock)))
        self.fel.schedule(self.config.position_period_s, EventKind.POSITION_TIMER, sensor_id)

    # Run

    def run(self, mode: str = RunMode.K_AS_CONFIGURED.value) -> CampaignReport:
        handlers = {
            EventKind.DELIVERY: self._on_delivery,
            EventKind.ARRIVAL: self._on_arrival,
            EventKind.MEASURED: self._on_measured,
            EventKind.POSITION_TIMER: self._on_timer,
        }
        self._central(OperatorCommand("start"))
        self._central(OperatorCommand("plan"))
        while self.fel:
            event = self.fel.trigger()
            handlers[event.kind](event)
        return self._report(mode)

    def _report(self, mode: str) -> CampaignReport:
        c = self.campaign
        report = CampaignReport(
            mode=mode,
            seed=c.seed,
            sensor_count=len(c.sensors),
            point_count=len(c.points),
        )
        for sid in sorted(self.motion):
            m = self.motion[sid]
            report.per_sensor_time[sid] = (m.finished - m.started) if m.started is not None and m.finished is not None else 0.0
            report.total_distance[sid] = m.distance
        report.assigned = assigned_points(self.central)
        report.convergence = {sid: list(t.best_lengths) for sid, t in sorted(self.central.traces.items())}
        report.records = list(self.central.records)
        report.trace = list(self.trace)

        if not report.complete:
            report.notes.append(f"collected {len(report.records)} of {report.point_count} measurements")
            self.log.warning(f"Campaign incomplete: {report.notes[-1]}")
        open_sensors = pending_sensors(self.central)
        if open_sensors:
            report.notes.append(f"sensors never stopped: {', '.join(map(str, open_sensors))}")
        self.log.info(f"Campaign done: {len(report.records)} records, overall time {report.overall_time:.1f}s")
        return report


def run_campaign(c: Campaign, ga: GAParams = GAParams(),
                 mode: RunMode = RunMode.K_AS_CONFIGURED,
                 config: SimConfig = SimConfig(),
                 log: Optional[logging.Logger] = None) -> CampaignReport:
    """
    Simulate one full campaign and report times, distances and records.

    With FORCE_SINGLE_SENSOR only the lowest-id sensor takes part.
    """
    log = log or logging.getLogger(__name__)
    mode = RunMode(mode)
    if mode is RunMode.FORCE_SINGLE_SENSOR:
        c = c.single_sensor()
    log.info(f"Simulating {len(c.points)} points with {len(c.sensors)} sensor(s), seed {c.seed}")
    return CampaignSimulator(c, ga, config, log).run(mode.value)
