"""
Simulate a full measurement campaign and report times, distances and records.

With ``--out`` the report goes to the file and a Markdown summary is printed
on stdout (unless ``--no-markdown``); without it the report itself is written
to stdout.
"""
import argparse
import logging

from cellsurvey.commands import output_format
from cellsurvey.commands._common import STDIO, ga_params, load_campaign_arg, write_output
from cellsurvey.core.result import CampaignReport
from cellsurvey.protocol.checks import check_conversation, closest_bs_violations
from cellsurvey.report.console import campaign_table, stderr_console
from cellsurvey.report.export import report_json, reports_json, sensors_csv, trace_text
from cellsurvey.report.md import render_comparison, render_markdown
from cellsurvey.sim.simulator import RunMode, SimConfig, run_campaign

COMMAND_INFO = {
    "help": "run the discrete-event campaign simulation",
    "formats": ("json", "csv"),
    "default_format": "json",
}

MODES = {
    "k": (RunMode.K_AS_CONFIGURED,),
    "single": (RunMode.FORCE_SINGLE_SENSOR,),
    "both": (RunMode.K_AS_CONFIGURED, RunMode.FORCE_SINGLE_SENSOR),
}


def add_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--campaign", required=True, help="campaign JSON document")
    p.add_argument("--mode", choices=sorted(MODES), default="k",
                   help="k: sensors as configured, single: lowest-id sensor only, both: run and compare")
    p.add_argument("--dwell", type=float, default=0.0, help="seconds spent measuring at each point (default: 0)")
    p.add_argument("--latency", type=float, default=0.0, help="one-way message delay in seconds (default: 0)")
    p.add_argument("--position-period", type=float, default=10.0,
                   help="seconds between POSITION reports (default: 10)")
    p.add_argument("--no-cell-info", action="store_true", help="sensors never ask the central node for cell details")
    p.add_argument("--duplicate", action="store_true", help="deliver every message twice")
    p.add_argument("--trace", metavar="PATH", help="write the message trace, one '<time_s> <line>' per message")
    p.add_argument("--check", action="store_true",
                   help="check the trace for conversation shape and closest base station after each run")
    p.add_argument("--no-markdown", action="store_true", help="skip the Markdown summary")


def validate(args: argparse.Namespace) -> str | None:
    if args.dwell < 0 or args.latency < 0:
        return "--dwell and --latency must be >= 0"
    if not args.position_period > 0:
        return "--position-period must be positive"
    if args.mode == "both" and output_format(args) == "csv":
        return "--format csv holds one run; use --mode k or --mode single"
    if args.mode == "both" and args.trace:
        return "--trace holds one run; use --mode k or --mode single"
    return None


def _config(args: argparse.Namespace) -> SimConfig:
    return SimConfig(
        dwell_s=args.dwell,
        latency_s=args.latency,
        position_period_s=args.position_period,
        cell_info_requests=not args.no_cell_info,
        duplicate_messages=args.duplicate,
        record_trace=bool(args.trace or args.check or output_format(args) == "json"),
    )


def _check(report: CampaignReport, campaign, log: logging.Logger) -> None:
    initial = {s.id: s.position for s in campaign.sensors}
    problems = check_conversation(report.trace) + closest_bs_violations(report.trace, campaign.base_stations, initial)
    for problem in problems:
        log.warning(f"Trace check ({report.mode}): {problem}")
    report.notes.append(f"trace check: {len(problems)} problem(s)" if problems else "trace check: passed")


def run(args: argparse.Namespace, log: logging.Logger) -> int:
    campaign = load_campaign_arg(args, log)
    ga = ga_params(args)
    config = _config(args)

    reports: list[CampaignReport] = []
    for mode in MODES[args.mode]:
        report = run_campaign(campaign, ga, mode, config, log)
        if args.check:
            _check(report, campaign.single_sensor() if mode is RunMode.FORCE_SINGLE_SENSOR else campaign, log)
        reports.append(report)

    if output_format(args) == "csv":
        data = sensors_csv(reports[0])
    elif len(reports) == 1:
        data = report_json(reports[0])
    else:
        data = reports_json(reports)
    write_output(data, args.out, log, "campaign report")

    if args.trace:
        write_output(trace_text(reports[0]), args.trace, log, "message trace")

    console = stderr_console()
    for report in reports:
        console.print(campaign_table(report))

    if args.out not in (None, STDIO) and not args.no_markdown:
        speeds = {s.id: s.speed for s in campaign.sensors}
        for report in reports:
            print(render_markdown(report, speeds))
        if len(reports) > 1:
            print(render_comparison(reports))
    return 0
