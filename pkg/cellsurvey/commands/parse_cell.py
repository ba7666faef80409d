"""
Parse serving-cell reports captured from the measuring modem.

The input holds SIM-AT blocks, each ended by ``OK``; consecutive blocks are
one sensor's stream, so reception and BER variations are filled in. With
``--csq`` every non-empty line is a ``+CSQ: <n>,<m>`` response instead.
"""
import argparse
import logging

from cellsurvey.commands import output_format
from cellsurvey.commands._common import STDIO, json_lines, read_text, rows_csv, write_output
from cellsurvey.core.result import CellMeasurement
from cellsurvey.telemetry.at import parse_at_csq, parse_cell_info, split_cell_blocks
from cellsurvey.telemetry.ingest import with_deltas

COMMAND_INFO = {
    "help": "parse SIM-AT cell blocks or +CSQ responses",
    "formats": ("json", "csv"),
    "default_format": "json",
}

CELL_FIELDS = ("cell_id", "timing_advance", "mcc", "mnc", "lac", "rssi_dbm", "rssi_delta",
               "ber_pct", "ber_delta", "bcc", "btcc", "ncc")


def add_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", default=STDIO, help="capture file, '-' for stdin (default)")
    p.add_argument("--csq", action="store_true", help="input is +CSQ lines")


def _csq_rows(text: str) -> list[dict]:
    rows = []
    for line in text.splitlines():
        if line.strip():
            rssi, ber = parse_at_csq(line)
            rows.append({"rssi_dbm": rssi, "ber_pct": ber})
    return rows


def run(args: argparse.Namespace, log: logging.Logger) -> int:
    text = read_text(args.input)
    if args.csq:
        rows, fields = _csq_rows(text), ("rssi_dbm", "ber_pct")
    else:
        samples: list[CellMeasurement] = with_deltas(parse_cell_info(b) for b in split_cell_blocks(text))
        rows, fields = [s.asdict() for s in samples], CELL_FIELDS
    log.info(f"Parsed {len(rows)} report(s)")

    if output_format(args) == "csv":
        data = rows_csv(rows, fields)
    else:
        data = json_lines([{k: row[k] for k in fields} for row in rows])
    write_output(data, args.out, log, "cell reports")
    return 0
