import pytest

from cellsurvey.core.errors import ParseError
from cellsurvey.core.geometry import Point2D
from cellsurvey.core.result import TraceEntry
from cellsurvey.protocol.checks import attribute, check_conversation, closest_bs_violations, parse_trace
from cellsurvey.protocol.codec import encode_line
from cellsurvey.protocol.messages import (CENTRAL, Ack, ClosestBs, GetMeasure, MeasureData, MessageEnvelope,
                                          Position, ReadyToSend, Start, Stop, Vector, Waypoint, sensor)

from .builders import four_stations, record

STATIONS = four_stations()
NEAR_101 = ClosestBs.of(STATIONS[0])
NEAR_104 = ClosestBs.of(STATIONS[3])


class _Trace:
    """Writes a central-side trace: central sends, then the sensor acknowledges."""

    def __init__(self):
        self.entries: list[TraceEntry] = []
        self.time = 0.0
        self.central_id = 0
        self.sensor_ids: dict[int, int] = {}

    def _add(self, env):
        self.time += 1.0
        self.entries.append(TraceEntry(self.time, encode_line(env)))

    def central(self, sid, kind, bs=NEAR_101, acked=True):
        self.central_id += 1
        self._add(MessageEnvelope(self.central_id, CENTRAL, kind, bs))
        if acked:
            self.sensor(sid, Ack(self.central_id))

    def sensor(self, sid, kind):
        self.sensor_ids[sid] = self.sensor_ids.get(sid, 0) + 1
        self._add(MessageEnvelope(self.sensor_ids[sid], sensor(sid), kind))


def _full_conversation(t: _Trace, sid: int, bs=NEAR_101):
    t.central(sid, Start(), bs)
    t.central(sid, Vector((Waypoint(1, Point2D(2000, 2000)),)), bs)
    t.sensor(sid, ReadyToSend(1))
    t.central(sid, GetMeasure(), bs)
    t.sensor(sid, MeasureData((record(1, 1, 2000, 2000, 5.0),)))
    t.central(sid, Stop(), bs)


def test_conforming_conversations():
    t = _Trace()
    _full_conversation(t, 1)
    t.central(2, Start())
    t.central(2, Stop())
    assert check_conversation(t.entries) == []


def test_attribution_recovers_addressee_from_acks():
    t = _Trace()
    t.central(5, Start())
    messages = attribute(t.entries)
    assert [m.sensor_id for m in messages] == [5, 5]


def test_missing_stop_is_reported():
    t = _Trace()
    t.central(1, Start())
    t.central(1, Vector((Waypoint(1, Point2D(1, 1)),)))
    t.sensor(1, ReadyToSend(1))
    t.central(1, GetMeasure())
    t.sensor(1, MeasureData(()))
    problems = check_conversation(t.entries)
    assert len(problems) == 1
    assert problems[0].startswith("sensor 1:")


def test_unacknowledged_central_message_is_reported():
    t = _Trace()
    t.central(1, Start(), acked=False)
    assert any("never acknowledged" in p for p in check_conversation(t.entries))


def test_time_going_backwards_is_reported():
    t = _Trace()
    _full_conversation(t, 1)
    t.entries[3] = TraceEntry(0.5, t.entries[3].line)
    assert any("backwards" in p for p in check_conversation(t.entries))


def test_closest_bs_follows_position_reports():
    t = _Trace()
    t.central(1, Start(), NEAR_101)
    t.sensor(1, Position(Point2D(7400, 7400), 10.0))
    t.central(1, Stop(), NEAR_104)
    assert closest_bs_violations(t.entries, STATIONS, {1: Point2D(2000, 2000)}) == []


def test_stale_closest_bs_is_a_violation():
    t = _Trace()
    t.central(1, Start(), NEAR_101)
    t.sensor(1, Position(Point2D(7400, 7400), 10.0))
    t.central(1, Stop(), NEAR_101)
    problems = closest_bs_violations(t.entries, STATIONS)
    assert len(problems) == 1
    assert "expected 104" in problems[0]


def test_trace_lines_round_trip_through_text():
    t = _Trace()
    _full_conversation(t, 1)
    text = [entry.render() for entry in t.entries]
    assert [(e.time, e.line) for e in parse_trace(text + [""])] == [(e.time, e.line) for e in t.entries]
    with pytest.raises(ParseError):
        TraceEntry.parse("no-time-here")
