"""
Re-decode a recorded message trace and check it.

Every line goes back through the wire codec. The conversation of each sensor
must have the expected shape; with ``--campaign`` every central message must
also name the base station closest to the sensor's last reported position.
"""
import argparse
import logging

from cellsurvey.commands import output_format
from cellsurvey.commands._common import dump_json, read_text, rows_csv, write_output
from cellsurvey.core.campaign import read_campaign
from cellsurvey.core.errors import TraceViolation
from cellsurvey.protocol.checks import attribute, check_conversation, closest_bs_violations, parse_trace

COMMAND_INFO = {
    "help": "decode and check a message trace written by simulate --trace",
    "formats": ("json", "csv"),
    "default_format": "json",
}


def add_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trace", required=True, help="trace file, one '<time_s> <line>' per message")
    p.add_argument("--campaign", help="campaign the trace came from, enables the closest base station check")


def run(args: argparse.Namespace, log: logging.Logger) -> int:
    trace = parse_trace(read_text(args.trace).splitlines())
    messages = attribute(trace)
    problems = check_conversation(trace)
    if args.campaign:
        campaign = read_campaign(args.campaign)
        initial = {s.id: s.position for s in campaign.sensors}
        problems += closest_bs_violations(trace, campaign.base_stations, initial)
    log.info(f"Replayed {len(messages)} message(s)")

    if output_format(args) == "csv":
        data = rows_csv(
            [{"time_s": m.time, "msg_id": m.envelope.msg_id, "from": m.envelope.sender.wire,
              "sensor": m.sensor_id, "kind": m.envelope.kind.KIND} for m in messages],
            ("time_s", "msg_id", "from", "sensor", "kind"),
        )
    else:
        conversations: dict[str, list[str]] = {}
        for m in messages:
            if m.sensor_id is not None:
                conversations.setdefault(str(m.sensor_id), []).append(m.envelope.kind.KIND)
        data = dump_json({
            "messages": len(messages),
            "conversations": dict(sorted(conversations.items(), key=lambda kv: int(kv[0]))),
            "problems": problems,
        })
    write_output(data, args.out, log, "trace summary")

    for problem in problems:
        log.warning(problem)
    if problems:
        raise TraceViolation(f"{len(problems)} problem(s) in {args.trace}")
    return 0
