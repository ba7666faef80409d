"""NMEA 0183 position sentences (GGA, RMC) from the sensor's GPS receiver."""
import re
from dataclasses import dataclass
from functools import reduce
from typing import Optional

from cellsurvey.core.errors import ChecksumMismatch, MalformedField, UnsupportedSentence

HEMISPHERE_SIGN = {"N": 1, "S": -1, "E": 1, "W": -1}

# ddmm.mmmm / dddmm.mmmm, plain digits only
_ANGLE = {
    2: re.compile(r"([0-9]{2})([0-9]{2}(?:\.[0-9]+)?)"),
    3: re.compile(r"([0-9]{3})([0-9]{2}(?:\.[0-9]+)?)"),
}
_HHMMSS = re.compile(r"([0-9]{2})([0-9]{2})([0-9]{2}(?:\.[0-9]+)?)")
_DIGITS = re.compile(r"[0-9]+")

FIX_QUALITY = {
    0: "invalid",
    1: "gps",
    2: "dgps",
    3: "pps",
    4: "rtk",
    5: "float rtk",
    6: "estimated",
    7: "manual",
    8: "simulation",
}


@dataclass(frozen=True, slots=True)
class NmeaFix:
    latitude: float           # decimal degrees, south negative
    longitude: float          # decimal degrees, west negative
    time_utc: float           # seconds of day
    quality: int
    satellites: Optional[int]  # RMC does not report it
    sentence: str = "GGA"

    def __post_init__(self):
        if abs(self.latitude) > 90 or abs(self.longitude) > 180:
            raise MalformedField(f"coordinates out of range: {self.latitude}, {self.longitude}")
        if self.quality not in FIX_QUALITY:
            raise MalformedField(f"fix quality {self.quality} not in 0..8")

    @property
    def valid(self) -> bool:
        return self.quality > 0

    def asdict(self) -> dict:
        return {
            "sentence": self.sentence,
            "lat": self.latitude,
            "lon": self.longitude,
            "time_utc": self.time_utc,
            "quality": self.quality,
            "satellites": self.satellites,
        }


def nmea_checksum(body: str) -> int:
    """XOR of every character between '$' and '*'."""
    return reduce(lambda acc, ch: acc ^ ord(ch), body, 0)


def with_checksum(body: str) -> str:
    """Frame a sentence body as ``$body*HH``."""
    return f"${body}*{nmea_checksum(body):02X}"


def _split(sentence: str) -> list[str]:
    line = sentence.strip()
    if not line.startswith("$") or "*" not in line:
        raise MalformedField(f"not an NMEA sentence: {line[:20]!r}")
    body, _, transmitted = line[1:].rpartition("*")
    if len(transmitted) != 2:
        raise MalformedField(f"checksum must be two hex digits, got {transmitted!r}")
    try:
        expected = int(transmitted, 16)
    except ValueError:
        raise MalformedField(f"checksum is not hexadecimal: {transmitted!r}")
    actual = nmea_checksum(body)
    if actual != expected:
        raise ChecksumMismatch(f"transmitted {expected:02X}, computed {actual:02X}")
    return body.split(",")


def _degrees(raw: str, hemisphere: str, degree_digits: int, what: str) -> float:
    if hemisphere not in HEMISPHERE_SIGN:
        raise MalformedField(f"{what}: bad hemisphere {hemisphere!r}")
    match = _ANGLE[degree_digits].fullmatch(raw)
    if not match:
        raise MalformedField(f"{what}: malformed value {raw!r}")
    degrees, minutes = int(match.group(1)), float(match.group(2))
    if minutes >= 60:
        raise MalformedField(f"{what}: minutes {minutes} >= 60")
    return HEMISPHERE_SIGN[hemisphere] * (degrees + minutes / 60.0)


def _time_of_day(raw: str) -> float:
    match = _HHMMSS.fullmatch(raw)
    if not match:
        raise MalformedField(f"time: malformed value {raw!r}")
    hours, minutes, seconds = int(match.group(1)), int(match.group(2)), float(match.group(3))
    if hours > 23 or minutes > 59 or seconds >= 61:
        raise MalformedField(f"time: out of range {raw!r}")
    return hours * 3600 + minutes * 60 + seconds


def _integer(raw: str, what: str) -> int:
    if not _DIGITS.fullmatch(raw):
        raise MalformedField(f"{what}: not an integer {raw!r}")
    return int(raw)


def parse_nmea(sentence: str) -> NmeaFix:
    """
    Parse one GGA or RMC sentence after verifying its checksum.

    Raises:
        ChecksumMismatch: ``*hh`` disagrees with the XOR of the body
        UnsupportedSentence: any other sentence type
        MalformedField: structurally broken fields
    """
    fields = _split(sentence)
    tag = fields[0]
    kind = tag[-3:]
    if len(tag) != 5 or kind not in ("GGA", "RMC"):
        raise UnsupportedSentence(f"sentence type {tag!r} is not supported")

    if kind == "GGA":
        if len(fields) < 8:
            raise MalformedField(f"GGA needs at least 8 fields, got {len(fields)}")
        return NmeaFix(
            latitude=_degrees(fields[2], fields[3], 2, "latitude"),
            longitude=_degrees(fields[4], fields[5], 3, "longitude"),
            time_utc=_time_of_day(fields[1]),
            quality=_integer(fields[6], "quality"),
            satellites=_integer(fields[7], "satellites"),
            sentence="GGA",
        )

    if len(fields) < 7:
        raise MalformedField(f"RMC needs at least 7 fields, got {len(fields)}")
    status = fields[2]
    if status not in ("A", "V"):
        raise MalformedField(f"RMC status {status!r} is neither A nor V")
    return NmeaFix(
        latitude=_degrees(fields[3], fields[4], 2, "latitude"),
        longitude=_degrees(fields[5], fields[6], 3, "longitude"),
        time_utc=_time_of_day(fields[1]),
        quality=1 if status == "A" else 0,
        satellites=None,
        sentence="RMC",
    )
