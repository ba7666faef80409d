"""Parse GGA/RMC sentences captured from the sensor's GPS receiver, one per line."""
import argparse
import logging

from cellsurvey.commands import output_format
from cellsurvey.commands._common import STDIO, json_lines, read_text, rows_csv, write_output
from cellsurvey.core.errors import TelemetryError
from cellsurvey.telemetry.nmea import NmeaFix, parse_nmea

COMMAND_INFO = {
    "help": "parse NMEA 0183 position sentences",
    "formats": ("json", "csv"),
    "default_format": "json",
}

CSV_FIELDS = ("sentence", "lat", "lon", "time_utc", "quality", "satellites")


def add_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", default=STDIO, help="capture file, '-' for stdin (default)")
    p.add_argument("--skip-invalid", action="store_true",
                   help="log and skip bad sentences instead of failing on the first one")


def run(args: argparse.Namespace, log: logging.Logger) -> int:
    fixes: list[NmeaFix] = []
    skipped = 0
    for number, line in enumerate(read_text(args.input).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            fixes.append(parse_nmea(line))
        except TelemetryError as e:
            if not args.skip_invalid:
                raise type(e)(f"line {number}: {e}") from e
            skipped += 1
            log.warning(f"Skipping line {number}: {type(e).__name__}: {e}")
    log.info(f"Parsed {len(fixes)} fix(es), skipped {skipped}")

    if output_format(args) == "csv":
        data = rows_csv([f.asdict() for f in fixes], CSV_FIELDS)
    else:
        data = json_lines([f.asdict() for f in fixes])
    write_output(data, args.out, log, "fixes")
    return 0
