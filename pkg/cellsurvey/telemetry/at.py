"""
AT-command responses from the measuring GSM modem.

``+CSQ`` and ``+CREG`` follow 3GPP TS 27.007. Detailed serving-cell data
comes from manufacturer-specific commands whose output is proprietary, so the
modem side is normalised to the SIM-AT block grammar::

    cid:<u32>
    ta:<u8>
    mcc:<u16>
    mnc:<u16>
    lac:<u16>
    rssi:<i16>      dBm
    ber:<f32>       percent
    bcc:<u8>
    btcc:<u8>
    ncc:<u8>
    OK
"""
import re
from dataclasses import dataclass
from typing import Optional

from cellsurvey.core.errors import MalformedField, MissingKey, OutOfRange
from cellsurvey.core.result import CellMeasurement, RSSI_MIN_DBM

CSQ_UNKNOWN = 99

# Assumed BER (%) for each RXQUAL class, TS 45.008
RXQUAL_BER_PCT = (0.14, 0.28, 0.57, 1.13, 2.26, 4.53, 9.05, 18.10)

CELL_INFO_KEYS = ("cid", "ta", "mcc", "mnc", "lac", "rssi", "ber", "bcc", "btcc", "ncc")

_INT_BOUNDS = {
    "cid": (0, 2**32 - 1),
    "ta": (0, 255),
    "mcc": (0, 999),
    "mnc": (0, 999),
    "lac": (0, 2**16 - 1),
    "rssi": (-(2**15), 2**15 - 1),
    "bcc": (0, 255),
    "btcc": (0, 255),
    "ncc": (0, 255),
}

_CSQ = re.compile(r"^\+CSQ:\s*(\d+)\s*,\s*(\d+)$")
_CREG = re.compile(r'^\+CREG:\s*(\d+)\s*,\s*(\d+)(?:\s*,\s*"([0-9A-Fa-f]{1,4})"\s*,\s*"([0-9A-Fa-f]{1,8})")?')


def parse_at_csq(line: str) -> tuple[Optional[int], Optional[float]]:
    """
    Decode ``+CSQ: <rssi>,<ber>`` into (dBm, BER percent); None means not known.

    Raises:
        MalformedField: line does not have the CSQ shape
        OutOfRange: codes outside 0..31 / 0..7 that are not 99
    """
    match = _CSQ.match(line.strip())
    if not match:
        raise MalformedField(f"not a +CSQ response: {line.strip()!r}")
    n, m = int(match.group(1)), int(match.group(2))

    if n == CSQ_UNKNOWN:
        rssi = None
    elif 0 <= n <= 31:
        rssi = RSSI_MIN_DBM + 2 * n
    else:
        raise OutOfRange(f"CSQ rssi code {n} not in 0..31 or 99")

    if m == CSQ_UNKNOWN:
        ber = None
    elif 0 <= m <= 7:
        ber = RXQUAL_BER_PCT[m]
    else:
        raise OutOfRange(f"CSQ ber code {m} not in 0..7 or 99")
    return rssi, ber


@dataclass(frozen=True, slots=True)
class Registration:
    mode: int
    status: int
    lac: Optional[int] = None
    cell_id: Optional[int] = None

    @property
    def registered(self) -> bool:
        # 1 = home network, 5 = roaming
        return self.status in (1, 5)


def parse_at_creg(line: str) -> Registration:
    """Decode ``+CREG: <n>,<stat>[,"<lac>","<ci>"]`` with hexadecimal LAC and cell id."""
    match = _CREG.match(line.strip())
    if not match:
        raise MalformedField(f"not a +CREG response: {line.strip()!r}")
    mode, status = int(match.group(1)), int(match.group(2))
    if status > 5:
        raise OutOfRange(f"registration status {status} not in 0..5")
    lac = int(match.group(3), 16) if match.group(3) else None
    cell_id = int(match.group(4), 16) if match.group(4) else None
    return Registration(mode=mode, status=status, lac=lac, cell_id=cell_id)


def _int_field(key: str, raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise MalformedField(f"{key}: not an integer {raw!r}")
    lo, hi = _INT_BOUNDS[key]
    if not lo <= value <= hi:
        raise OutOfRange(f"{key}: {value} outside [{lo}, {hi}]")
    return value


def parse_cell_info(block: str) -> CellMeasurement:
    """
    Parse one SIM-AT block into a CellMeasurement.

    Keys may come in any order but each exactly once; the block must end with
    ``OK``. Delta fields are left unset; they are computed across samples by
    ``cellsurvey.telemetry.ingest.with_deltas``.

    Raises:
        MissingKey: a required key is absent
        MalformedField: unknown or repeated key, bad value, missing ``OK``
    """
    values: dict[str, str] = {}
    terminated = False
    for raw_line in block.splitlines():
        line = raw_line.strip()
        if not line:
            continue
        if terminated:
            raise MalformedField(f"content after OK: {line!r}")
        if line == "OK":
            terminated = True
            continue
        key, sep, value = line.partition(":")
        key = key.strip()
        if not sep or key not in CELL_INFO_KEYS:
            raise MalformedField(f"unexpected line {line!r}")
        if key in values:
            raise MalformedField(f"key {key!r} repeated")
        values[key] = value.strip()

    for key in CELL_INFO_KEYS:
        if key not in values:
            raise MissingKey(f"cell info block lacks {key!r}")
    if not terminated:
        raise MalformedField("cell info block not terminated by OK")

    try:
        ber = float(values["ber"])
    except ValueError:
        raise MalformedField(f"ber: not a number {values['ber']!r}")

    return CellMeasurement(
        cell_id=_int_field("cid", values["cid"]),
        timing_advance=_int_field("ta", values["ta"]),
        mcc=_int_field("mcc", values["mcc"]),
        mnc=_int_field("mnc", values["mnc"]),
        lac=_int_field("lac", values["lac"]),
        rssi_dbm=_int_field("rssi", values["rssi"]),
        ber_pct=ber,
        bcc=_int_field("bcc", values["bcc"]),
        btcc=_int_field("btcc", values["btcc"]),
        ncc=_int_field("ncc", values["ncc"]),
    )


def split_cell_blocks(text: str) -> list[str]:
    """Cut a capture holding several SIM-AT blocks at each ``OK`` line."""
    blocks: list[str] = []
    current: list[str] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        current.append(line)
        if line.strip() == "OK":
            blocks.append("\n".join(current) + "\n")
            current = []
    if current:
        blocks.append("\n".join(current) + "\n")
    return blocks


def format_cell_info(cell: CellMeasurement) -> str:
    if cell.rssi_dbm is None or cell.ber_pct is None:
        raise ValueError("SIM-AT blocks carry known rssi and ber only")
    return (
        f"cid:{cell.cell_id}\n"
        f"ta:{cell.timing_advance}\n"
        f"mcc:{cell.mcc}\n"
        f"mnc:{cell.mnc}\n"
        f"lac:{cell.lac}\n"
        f"rssi:{cell.rssi_dbm}\n"
        f"ber:{cell.ber_pct!r}\n"
        f"bcc:{cell.bcc}\n"
        f"btcc:{cell.btcc}\n"
        f"ncc:{cell.ncc}\n"
        "OK\n"
    )
