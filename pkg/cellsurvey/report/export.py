"""File exports for campaign reports: full JSON, per-sensor CSV, message trace."""
import csv
import io
import json
from typing import Sequence

from cellsurvey.core.result import CampaignReport


def report_json(report: CampaignReport) -> str:
    return json.dumps(report.asdict(), indent=2, allow_nan=False) + "\n"


def reports_json(reports: Sequence[CampaignReport]) -> str:
    """One document for several runs of the same campaign, keyed by mode."""
    return json.dumps({r.mode: r.asdict() for r in reports}, indent=2, allow_nan=False) + "\n"


def sensors_csv(report: CampaignReport) -> str:
    """``sensor_id,distance_m,time_s`` rows, lowest id first."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["sensor_id", "distance_m", "time_s"])
    for sid in sorted(report.per_sensor_time):
        writer.writerow([sid, repr(report.total_distance.get(sid, 0.0)), repr(report.per_sensor_time[sid])])
    return buf.getvalue()


def records_csv(report: CampaignReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["seq", "point_id", "x", "y", "time_s", "cell_id", "ta", "mcc", "mnc", "lac",
                     "rssi_dbm", "rssi_delta", "ber_pct", "ber_delta", "bcc", "btcc", "ncc"])
    for r in report.records:
        c = r.cell
        writer.writerow([r.seq, r.point_id, repr(r.position.x), repr(r.position.y), repr(r.time),
                         c.cell_id, c.timing_advance, c.mcc, c.mnc, c.lac,
                         _blank(c.rssi_dbm), _blank(c.rssi_delta), _blank(c.ber_pct), _blank(c.ber_delta),
                         c.bcc, c.btcc, c.ncc])
    return buf.getvalue()


def _blank(value) -> str:
    return "" if value is None else repr(value)


def trace_text(report: CampaignReport) -> str:
    """The message trace, one ``<time_s> <wire line>`` per message."""
    return "".join(entry.render() + "\n" for entry in report.trace)
