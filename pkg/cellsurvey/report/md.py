from typing import Sequence

from cellsurvey.core.campaign import ms_to_kmh
from cellsurvey.core.result import CampaignReport


def render_markdown(r: CampaignReport, speeds: dict[int, float] | None = None) -> str:
    """Markdown summary of one simulated campaign."""

    md = [
        "# Measurement Campaign Report",
        f"**Mode**: {'single sensor' if r.mode == 'single' else f'{r.sensor_count} sensor(s)'}",
        f"**Seed**: `{r.seed}`",
        f"**Measurement points**: {r.point_count}",
        f"**Overall time**: {_duration(r.overall_time)}",
        f"**Sum of sensor times**: {_duration(r.sum_of_sensor_times)}",
        "",
    ]

    md.append("## 🚗 Sensors")
    md.append("")
    md.append("| Sensor | Points | Distance (km) | Time | Speed (km/h) |")
    md.append("|---:|---:|---:|---:|---:|")
    for sid in sorted(r.per_sensor_time):
        assigned = len(r.assigned.get(sid, []))
        distance_km = r.total_distance.get(sid, 0.0) / 1000.0
        speed = f"{ms_to_kmh(speeds[sid]):.1f}" if speeds and sid in speeds else "-"
        slowest = " ⏱" if r.per_sensor_time[sid] == r.overall_time and r.overall_time > 0 else ""
        md.append(f"| {sid}{slowest} | {assigned} | {distance_km:.2f} | {_duration(r.per_sensor_time[sid])} | {speed} |")
    md.append("")

    if r.convergence:
        md.append("## 🧬 Route Optimisation")
        md.append("")
        for sid, trace in sorted(r.convergence.items()):
            if not trace:
                continue
            md.append(f"* Sensor {sid}: {trace[0] / 1000.0:.2f} km after generation 1, "
                      f"{trace[-1] / 1000.0:.2f} km after generation {len(trace)}")
        md.append("")

    if r.records:
        md.append("## 📶 Measurements")
        md.append("")
        _add_cell_summary(md, r)

    if r.notes:
        md.append("## 📝 Notes")
        md.append("")
        for note in r.notes:
            md.append(f"* {note}")
        md.append("")

    status = "✅ complete" if r.complete else f"⚠️ {len(r.records)}/{r.point_count} measurements collected"
    md.append(f"**Status**: {status}")
    md.append("")
    md.append("---")
    md.append("*Report generated by cellsurvey*")
    return "\n".join(md) + "\n"


def _duration(seconds: float) -> str:
    hours, rest = divmod(seconds, 3600)
    minutes, secs = divmod(rest, 60)
    if hours:
        return f"{int(hours)}h {int(minutes):02d}m {secs:04.1f}s ({seconds:.1f} s)"
    if minutes:
        return f"{int(minutes)}m {secs:04.1f}s ({seconds:.1f} s)"
    return f"{seconds:.1f} s"


def _add_cell_summary(md: list[str], r: CampaignReport) -> None:
    """One row per serving cell seen during the campaign."""
    by_cell: dict[int, list[int]] = {}
    for record in r.records:
        if record.cell.rssi_dbm is not None:
            by_cell.setdefault(record.cell.cell_id, []).append(record.cell.rssi_dbm)
        else:
            by_cell.setdefault(record.cell.cell_id, [])

    md.append("| Cell | Samples | Mean RSSI (dBm) | Min | Max |")
    md.append("|---:|---:|---:|---:|---:|")
    for cell_id, levels in sorted(by_cell.items()):
        md.append(f"| {cell_id} | {len(levels)} | {_mean(levels)} | "
                  f"{min(levels) if levels else '-'} | {max(levels) if levels else '-'} |")
    md.append("")


def _mean(values: Sequence[int]) -> str:
    return f"{sum(values) / len(values):.1f}" if values else "-"


def render_comparison(reports: Sequence[CampaignReport]) -> str:
    """Side by side overall times for runs of the same campaign in different modes."""
    md = ["# Mode Comparison", "", "| Mode | Sensors | Overall time | Sum of sensor times |", "|---|---:|---:|---:|"]
    for r in reports:
        md.append(f"| {r.mode} | {r.sensor_count} | {_duration(r.overall_time)} | {_duration(r.sum_of_sensor_times)} |")
    if len(reports) == 2 and reports[1].overall_time > 0:
        ratio = reports[0].overall_time / reports[1].overall_time
        md.append("")
        md.append(f"**Ratio {reports[0].mode}/{reports[1].mode}**: {ratio:.3f}")
    return "\n".join(md) + "\n"
