"""
Line-delimited JSON wire format.

One envelope per UTF-8 line::

    {"id":<u64>,"from":"central"|"sensor/<u32>","bs":{"x":..,"y":..,"cid":..}?,"kind":"<KIND>",...}

``bs`` is present exactly when the sender is the central node. Keys are
written in that order, kind fields after ``kind``; floats use the shortest
round-trip repr. ``decode`` is strict: unknown or missing keys, duplicate
keys, wrong types and direction violations are all ParseError.
"""
import json
import math
import re
from typing import Any, Callable, Union

from cellsurvey.core.campaign import BaseStation
from cellsurvey.core.errors import CellSurveyError, ParseError
from cellsurvey.core.geometry import Point2D
from cellsurvey.core.result import CellMeasurement, MeasurementRecord
from cellsurvey.protocol.messages import (
    U32_MAX, U64_MAX, Ack, CellInfo, CellInfoReply, ClosestBs, GetMeasure, MeasureData,
    MessageEnvelope, MoveTo, Position, ReadyToSend, Sender, Start, Stop, Vector, Waypoint,
)

_SENSOR_FROM = re.compile(r"sensor/(0|[1-9][0-9]{0,9})")


def _num(value: float) -> float:
    return float(value)


def _waypoint(w: Waypoint) -> dict:
    return {"pid": w.point_id, "x": _num(w.position.x), "y": _num(w.position.y)}


def _cell(c: CellMeasurement) -> dict:
    return {
        "cid": c.cell_id, "ta": c.timing_advance, "mcc": c.mcc, "mnc": c.mnc, "lac": c.lac,
        "rssi": c.rssi_dbm, "rssi_d": c.rssi_delta,
        "ber": c.ber_pct, "ber_d": c.ber_delta,
        "bcc": c.bcc, "btcc": c.btcc, "ncc": c.ncc,
    }


def _record(r: MeasurementRecord) -> dict:
    return {
        "seq": r.seq, "pid": r.point_id,
        "x": _num(r.position.x), "y": _num(r.position.y),
        "t": _num(r.time), "cell": _cell(r.cell),
    }


def _kind_fields(kind) -> dict:
    if isinstance(kind, (Start, Stop)):
        return {}
    if isinstance(kind, MoveTo):
        return {"target": _waypoint(kind.target)}
    if isinstance(kind, GetMeasure):
        if kind.since is None:
            return {"scope": "COMPLETE"}
        return {"scope": "PARTIAL", "since": kind.since}
    if isinstance(kind, Vector):
        return {"order": [_waypoint(w) for w in kind.order]}
    if isinstance(kind, ReadyToSend):
        return {"count": kind.count}
    if isinstance(kind, CellInfo):
        return {"cid": kind.cell_id}
    if isinstance(kind, Position):
        return {"at": {"x": _num(kind.at.x), "y": _num(kind.at.y)}, "time": _num(kind.time)}
    if isinstance(kind, Ack):
        return {"of": kind.of}
    if isinstance(kind, MeasureData):
        return {"records": [_record(r) for r in kind.records]}
    if isinstance(kind, CellInfoReply):
        s = kind.station
        return {"station": {"id": s.id, "x": _num(s.position.x), "y": _num(s.position.y),
                            "cid": s.cell_id, "antenna": s.static_info}}
    raise TypeError(f"not a message kind: {kind!r}")


def to_json(env: MessageEnvelope) -> dict:
    obj: dict[str, Any] = {"id": env.msg_id, "from": env.sender.wire}
    if env.closest_bs is not None:
        bs = env.closest_bs
        obj["bs"] = {"x": _num(bs.position.x), "y": _num(bs.position.y), "cid": bs.cell_id}
    obj["kind"] = env.kind.KIND
    obj.update(_kind_fields(env.kind))
    return obj


def encode_line(env: MessageEnvelope) -> str:
    """The wire line without its terminating newline."""
    return json.dumps(to_json(env), separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def encode(env: MessageEnvelope) -> bytes:
    return (encode_line(env) + "\n").encode("utf-8")


# Decoding

class _Reader:
    """Typed field access over one decoded line; failures point back into the text."""

    def __init__(self, text: str):
        self.text = text

    def fail(self, key: str, reason: str) -> ParseError:
        offset = self.text.find(f'"{key}"') if key else 0
        return ParseError(max(offset, 0), reason)

    def obj(self, value: Any, where: str, required: set[str], optional: frozenset = frozenset()) -> dict:
        if not isinstance(value, dict):
            raise self.fail(where, f"{where}: expected an object")
        missing = required - value.keys()
        if missing:
            raise self.fail(where, f"{where}: missing {', '.join(sorted(missing))}")
        unknown = value.keys() - required - optional
        if unknown:
            key = sorted(unknown)[0]
            raise self.fail(key, f"{where}: unknown key {key!r}")
        return value

    def as_int(self, value: Any, key: str, lo: int = 0, hi: int = U64_MAX) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.fail(key, f"{key}: expected an integer")
        if not lo <= value <= hi:
            raise self.fail(key, f"{key}: {value} outside [{lo}, {hi}]")
        return value

    def as_float(self, value: Any, key: str) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self.fail(key, f"{key}: expected a number")
        number = float(value)
        if not math.isfinite(number):
            raise self.fail(key, f"{key}: not finite")
        return number

    def optional(self, value: Any, key: str, convert: Callable[[Any, str], Any]):
        return None if value is None else convert(value, key)

    def as_str(self, value: Any, key: str) -> str:
        if not isinstance(value, str):
            raise self.fail(key, f"{key}: expected a string")
        try:
            value.encode("utf-8")
        except UnicodeEncodeError:
            raise self.fail(key, f"{key}: lone surrogate in string")
        return value

    def as_list(self, value: Any, key: str) -> list:
        if not isinstance(value, list):
            raise self.fail(key, f"{key}: expected a list")
        return value

    def point(self, value: dict, where: str) -> Point2D:
        return Point2D(self.as_float(value["x"], "x"), self.as_float(value["y"], "y"))

    def waypoint(self, value: Any, where: str) -> Waypoint:
        w = self.obj(value, where, {"pid", "x", "y"})
        return Waypoint(self.as_int(w["pid"], "pid", hi=U32_MAX), self.point(w, where))

    def cell(self, value: Any) -> CellMeasurement:
        c = self.obj(value, "cell", {"cid", "ta", "mcc", "mnc", "lac", "rssi", "rssi_d",
                                     "ber", "ber_d", "bcc", "btcc", "ncc"})
        try:
            return CellMeasurement(
                cell_id=self.as_int(c["cid"], "cid", hi=U32_MAX),
                timing_advance=self.as_int(c["ta"], "ta", hi=255),
                mcc=self.as_int(c["mcc"], "mcc", hi=999),
                mnc=self.as_int(c["mnc"], "mnc", hi=999),
                lac=self.as_int(c["lac"], "lac", hi=2**16 - 1),
                rssi_dbm=self.optional(c["rssi"], "rssi", lambda v, k: self.as_int(v, k, lo=-(2**15), hi=2**15 - 1)),
                rssi_delta=self.optional(c["rssi_d"], "rssi_d", self.as_float),
                ber_pct=self.optional(c["ber"], "ber", self.as_float),
                ber_delta=self.optional(c["ber_d"], "ber_d", self.as_float),
                bcc=self.as_int(c["bcc"], "bcc", hi=255),
                btcc=self.as_int(c["btcc"], "btcc", hi=255),
                ncc=self.as_int(c["ncc"], "ncc", hi=255),
            )
        except ParseError:
            raise
        except CellSurveyError as e:
            raise self.fail("cell", f"cell: {e}")

    def record(self, value: Any) -> MeasurementRecord:
        r = self.obj(value, "records", {"seq", "pid", "x", "y", "t", "cell"})
        return MeasurementRecord(
            seq=self.as_int(r["seq"], "seq", lo=1),
            point_id=self.as_int(r["pid"], "pid", hi=U32_MAX),
            position=self.point(r, "records"),
            time=self.as_float(r["t"], "t"),
            cell=self.cell(r["cell"]),
        )


def _no_duplicate_keys(pairs: list[tuple[str, Any]]) -> dict:
    obj: dict[str, Any] = {}
    for key, value in pairs:
        if key in obj:
            raise ValueError(f"duplicate key {key!r}")
        obj[key] = value
    return obj


def _kind(r: _Reader, kind: str, obj: dict):
    fields = {k: v for k, v in obj.items() if k not in ("id", "from", "bs", "kind")}

    def exactly(*keys: str, optional: frozenset = frozenset()) -> dict:
        return r.obj(fields, kind, set(keys), optional)

    if kind == "START":
        exactly()
        return Start()
    if kind == "STOP":
        exactly()
        return Stop()
    if kind == "MOVE_TO":
        return MoveTo(r.waypoint(exactly("target")["target"], "target"))
    if kind == "GET_MEASURE":
        f = exactly("scope", optional=frozenset({"since"}))
        scope = r.as_str(f["scope"], "scope")
        if scope == "COMPLETE":
            if "since" in f:
                raise r.fail("since", "COMPLETE scope takes no since")
            return GetMeasure()
        if scope == "PARTIAL":
            if "since" not in f:
                raise r.fail("scope", "PARTIAL scope needs since")
            return GetMeasure(r.as_int(f["since"], "since"))
        raise r.fail("scope", f"unknown scope {scope!r}")
    if kind == "VECTOR":
        order = r.as_list(exactly("order")["order"], "order")
        if not order:
            raise r.fail("order", "VECTOR order is empty")
        return Vector(tuple(r.waypoint(w, "order") for w in order))
    if kind == "READY_TO_SEND":
        return ReadyToSend(r.as_int(exactly("count")["count"], "count"))
    if kind == "CELL_INFO":
        return CellInfo(r.as_int(exactly("cid")["cid"], "cid", hi=U32_MAX))
    if kind == "POSITION":
        f = exactly("at", "time")
        at = r.obj(f["at"], "at", {"x", "y"})
        return Position(r.point(at, "at"), r.as_float(f["time"], "time"))
    if kind == "ACK":
        return Ack(r.as_int(exactly("of")["of"], "of"))
    if kind == "MEASURE_DATA":
        records = r.as_list(exactly("records")["records"], "records")
        return MeasureData(tuple(r.record(item) for item in records))
    if kind == "CELL_INFO_REPLY":
        s = r.obj(exactly("station")["station"], "station", {"id", "x", "y", "cid", "antenna"})
        return CellInfoReply(BaseStation(
            id=r.as_int(s["id"], "id"),
            position=r.point(s, "station"),
            cell_id=r.as_int(s["cid"], "cid", hi=U32_MAX),
            static_info=r.as_str(s["antenna"], "antenna"),
        ))
    raise r.fail("kind", f"unknown kind {kind!r}")


def decode(data: Union[bytes, str]) -> MessageEnvelope:
    """
    Parse one wire line back into an envelope.

    A single trailing newline is accepted; anything else around the object is not.

    Raises:
        ParseError: with the character offset of the problem and a reason
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(e.start, "invalid UTF-8")
    else:
        text = data
    if text.endswith("\n"):
        text = text[:-1]
    if "\n" in text:
        raise ParseError(text.index("\n"), "more than one line")

    try:
        obj = json.loads(text, object_pairs_hook=_no_duplicate_keys)
    except json.JSONDecodeError as e:
        raise ParseError(e.pos, e.msg)
    except ValueError as e:
        raise ParseError(0, str(e))
    except RecursionError:
        raise ParseError(0, "nesting too deep")

    r = _Reader(text)
    if not isinstance(obj, dict):
        raise ParseError(0, "expected a JSON object")
    for key in ("id", "from", "kind"):
        if key not in obj:
            raise ParseError(0, f"missing {key!r}")

    msg_id = r.as_int(obj["id"], "id")
    origin = r.as_str(obj["from"], "from")
    if origin == "central":
        sender = Sender()
    else:
        match = _SENSOR_FROM.fullmatch(origin)
        if not match:
            raise r.fail("from", f"bad sender {origin!r}")
        sender = Sender(r.as_int(int(match.group(1)), "from", hi=U32_MAX))

    closest = None
    if "bs" in obj:
        if not sender.is_central:
            raise r.fail("bs", "sensor messages carry no closest base station")
        bs = r.obj(obj["bs"], "bs", {"x", "y", "cid"})
        closest = ClosestBs(r.point(bs, "bs"), r.as_int(bs["cid"], "cid", hi=U32_MAX))
    elif sender.is_central:
        raise r.fail("from", "central message without closest base station")

    try:
        kind = _kind(r, r.as_str(obj["kind"], "kind"), obj)
        return MessageEnvelope(msg_id=msg_id, sender=sender, kind=kind, closest_bs=closest)
    except ParseError:
        raise
    except CellSurveyError as e:
        raise r.fail("kind", str(e))
