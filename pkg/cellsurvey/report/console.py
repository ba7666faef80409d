"""Rich tables for the human-facing side of the commands (always on stderr)."""
from typing import Sequence

from rich.console import Console
from rich.table import Table

from cellsurvey.core.result import CampaignReport
from cellsurvey.planning.dominance import PartitionStats
from cellsurvey.sim.sweep import SweepRow


def stderr_console() -> Console:
    return Console(stderr=True)


def partition_table(stats: PartitionStats) -> Table:
    table = Table(title="📍 Points per sensor")
    table.add_column("Sensor", style="cyan", no_wrap=True)
    table.add_column("Points", style="magenta", justify="right")
    table.add_column("Share", style="green", justify="right")
    for sid, count in sorted(stats.counts.items()):
        share = f"{100.0 * count / stats.total:.1f}%" if stats.total else "-"
        table.add_row(str(sid), str(count), share)
    table.caption = f"{stats.total} points, load {stats.min_load}..{stats.max_load}"
    return table


def campaign_table(report: CampaignReport) -> Table:
    table = Table(title=f"🚗 Campaign ({report.mode})")
    table.add_column("Sensor", style="cyan", no_wrap=True)
    table.add_column("Points", justify="right")
    table.add_column("Distance (km)", style="magenta", justify="right")
    table.add_column("Time (s)", style="green", justify="right")
    for sid in sorted(report.per_sensor_time):
        table.add_row(
            str(sid),
            str(len(report.assigned.get(sid, []))),
            f"{report.total_distance.get(sid, 0.0) / 1000.0:.2f}",
            f"{report.per_sensor_time[sid]:.1f}",
        )
    table.caption = f"overall {report.overall_time:.1f} s"
    return table


def sweep_table(rows: Sequence[SweepRow]) -> Table:
    table = Table(title="📈 Sweep")
    for name in ("n", "k", "rep"):
        table.add_column(name, style="cyan", justify="right")
    table.add_column("Overall (s)", style="green", justify="right")
    table.add_column("Sum (s)", justify="right")
    table.add_column("Best length (km)", style="magenta", justify="right")
    for r in rows:
        best = f"{r.convergence[-1] / 1000.0:.2f}" if r.convergence else "-"
        table.add_row(str(r.n), str(r.k), str(r.rep), f"{r.overall_time:.1f}", f"{r.sum_of_times:.1f}", best)
    return table
