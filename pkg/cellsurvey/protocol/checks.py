"""
Offline checks over a message trace, as logged from the central node's side.

Central messages carry no addressee on the wire. When a trace entry does not
record one, it is recovered from the sensor ACK that names the message id.
"""
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from cellsurvey.core.campaign import BaseStation
from cellsurvey.core.geometry import Point2D
from cellsurvey.core.result import TraceEntry
from cellsurvey.protocol.codec import decode
from cellsurvey.protocol.messages import Ack, MessageEnvelope, Position
from cellsurvey.telemetry.modem import serving_station

CONVERSATION_SHAPE = ("START", "VECTOR", "READY_TO_SEND", "GET_MEASURE", "MEASURE_DATA", "STOP")
IDLE_SHAPE = ("START", "STOP")


@dataclass(frozen=True, slots=True)
class TracedMessage:
    time: float
    envelope: MessageEnvelope
    sensor_id: Optional[int]  # the sensor on the other end; None if unknown


def parse_trace(lines: Iterable[str]) -> list[TraceEntry]:
    return [TraceEntry.parse(line) for line in lines if line.strip()]


def attribute(trace: Sequence[TraceEntry]) -> list[TracedMessage]:
    """Decode a trace and pair every message with the sensor it was exchanged with."""
    decoded = [(entry, decode(entry.line)) for entry in trace]
    acked: dict[int, int] = {}
    for _, env in decoded:
        if not env.sender.is_central and isinstance(env.kind, Ack):
            acked.setdefault(env.kind.of, env.sender.sensor_id)

    out: list[TracedMessage] = []
    for entry, env in decoded:
        if env.sender.is_central:
            peer = entry.to if entry.to is not None else acked.get(env.msg_id)
        else:
            peer = env.sender.sensor_id
        out.append(TracedMessage(entry.time, env, peer))
    return out


def _is_subsequence(needle: Sequence[str], haystack: Sequence[str]) -> bool:
    it = iter(haystack)
    return all(any(kind == wanted for kind in it) for wanted in needle)


def check_conversation(trace: Sequence[TraceEntry]) -> list[str]:
    """
    Problems with the per-sensor conversation shape; an empty list means the trace conforms.

    A sensor that was sent a VECTOR must show START, VECTOR, READY_TO_SEND,
    GET_MEASURE, MEASURE_DATA, STOP in that order (other messages may come
    between). A sensor without a route must still be started and stopped.
    """
    messages = attribute(trace)
    problems: list[str] = []
    kinds: dict[int, list[str]] = {}
    last_time = float("-inf")
    for m in messages:
        if m.time < last_time:
            problems.append(f"time goes backwards at message {m.envelope.msg_id} ({m.time!r} < {last_time!r})")
        last_time = max(last_time, m.time)
        if m.sensor_id is None:
            problems.append(f"central message {m.envelope.msg_id} ({m.envelope.kind.KIND}) was never acknowledged")
            continue
        kinds.setdefault(m.sensor_id, []).append(m.envelope.kind.KIND)

    for sensor_id, seen in sorted(kinds.items()):
        shape = CONVERSATION_SHAPE if "VECTOR" in seen else IDLE_SHAPE
        if not _is_subsequence(shape, seen):
            problems.append(f"sensor {sensor_id}: conversation {' '.join(seen)} lacks {' -> '.join(shape)}")
    return problems


def closest_bs_violations(trace: Sequence[TraceEntry],
                          stations: Sequence[BaseStation],
                          initial_positions: Optional[Mapping[int, Point2D]] = None) -> list[str]:
    """
    Central messages whose closest base station disagrees with the sensor's last reported position.

    Without ``initial_positions`` a sensor is only checked after its first POSITION report.
    """
    positions: dict[int, Point2D] = dict(initial_positions or {})
    problems: list[str] = []
    for m in attribute(trace):
        env = m.envelope
        if not env.sender.is_central:
            if isinstance(env.kind, Position):
                positions[env.sender.sensor_id] = env.kind.at
            continue
        if env.closest_bs is None:
            problems.append(f"central message {env.msg_id} has no closest base station")
            continue
        if m.sensor_id is None or m.sensor_id not in positions:
            continue
        expected = serving_station(positions[m.sensor_id], stations)
        if env.closest_bs.cell_id != expected.cell_id or env.closest_bs.position != expected.position:
            problems.append(
                f"central message {env.msg_id} to sensor {m.sensor_id}: closest cell "
                f"{env.closest_bs.cell_id}, expected {expected.cell_id}"
            )
    return problems
