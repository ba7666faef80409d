"""
Experiment sweeps over point counts, sensor counts and repetitions.

Each (n, k, rep) cell is an independent campaign, so cells may run in worker
processes; rows always come back in (n, k, rep) order.
"""
import asyncio
import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime
from typing import Optional, Sequence

from cellsurvey.planning.genetic import GAParams
from cellsurvey.sim.simulator import SimConfig, run_campaign
from cellsurvey.sim.workload import DEFAULT_AREA, DEFAULT_SPEED_KMH, sweep_campaign


@dataclass(frozen=True, slots=True)
class SweepTask:
    n: int
    k: int
    rep: int
    base_seed: int
    ks: tuple[int, ...]
    ga: GAParams
    config: SimConfig
    area: tuple[float, float]
    speed_kmh: float


@dataclass(frozen=True, slots=True)
class SweepRow:
    n: int
    k: int
    rep: int
    seed: int
    overall_time: float
    sum_of_times: float
    records: int
    convergence: tuple[float, ...]  # per generation, summed over sensors

    def asdict(self) -> dict:
        return {
            "n": self.n, "k": self.k, "rep": self.rep, "seed": self.seed,
            "overall_time_s": self.overall_time, "sum_time_s": self.sum_of_times,
            "records": self.records, "convergence": list(self.convergence),
        }


def _summed_convergence(per_sensor: dict[int, list[float]]) -> tuple[float, ...]:
    traces = [t for t in per_sensor.values() if t]
    if not traces:
        return ()
    return tuple(sum(values) for values in zip(*traces))


def run_cell(task: SweepTask) -> SweepRow:
    c = sweep_campaign(task.n, task.k, task.rep, task.base_seed, task.ks, task.area, task.speed_kmh)
    report = run_campaign(c, task.ga, config=task.config, log=logging.getLogger(f"{__name__}.worker"))
    return SweepRow(
        n=task.n, k=task.k, rep=task.rep, seed=c.seed,
        overall_time=report.overall_time,
        sum_of_times=report.sum_of_sensor_times,
        records=len(report.records),
        convergence=_summed_convergence(report.convergence),
    )


def _tasks(ns: Sequence[int], ks: Sequence[int], repetitions: int, base_seed: int,
           ga: GAParams, config: SimConfig, area: tuple[float, float], speed_kmh: float) -> list[SweepTask]:
    pool = tuple(ks)
    return [
        SweepTask(n, k, rep, base_seed, pool, ga, config, area, speed_kmh)
        for n in ns for k in ks for rep in range(repetitions)
    ]


async def _run_parallel(tasks: list[SweepTask], jobs: int, log: logging.Logger) -> list[SweepRow]:
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        async def _one(task: SweepTask) -> SweepRow:
            row = await loop.run_in_executor(pool, run_cell, task)
            log.info(f"n={row.n} k={row.k} rep={row.rep}: overall {row.overall_time:.1f} s")
            return row
        return list(await asyncio.gather(*[_one(t) for t in tasks]))


def sweep(ns: Sequence[int], ks: Sequence[int], repetitions: int, base_seed: int,
          ga: GAParams = GAParams(), config: SimConfig = SimConfig(record_trace=False),
          area: tuple[float, float] = DEFAULT_AREA, speed_kmh: float = DEFAULT_SPEED_KMH,
          jobs: int = 1, log: Optional[logging.Logger] = None) -> list[SweepRow]:
    """
    Run every (n, k, rep) campaign and collect one row each.

    Args:
        ns: point counts
        ks: sensor counts
        repetitions: campaigns per (n, k); 0 gives an empty table
        base_seed: every campaign seed derives from it
        jobs: worker processes; results do not depend on it
    """
    log = log or logging.getLogger(__name__)
    if not ns or not ks:
        raise ValueError("sweep needs at least one point count and one sensor count")
    tasks = _tasks(ns, ks, repetitions, base_seed, ga, config, area, speed_kmh)
    if not tasks:
        return []

    started = datetime.now()
    log.info(f"Sweep of {len(tasks)} campaign(s) with {jobs} job(s)")
    if jobs > 1:
        rows = asyncio.run(_run_parallel(tasks, jobs, log))
    else:
        rows = []
        for task in tasks:
            row = run_cell(task)
            log.info(f"n={row.n} k={row.k} rep={row.rep}: overall {row.overall_time:.1f} s")
            rows.append(row)
    rows.sort(key=lambda r: (r.n, r.k, r.rep))
    log.info(f"Sweep completed in {(datetime.now() - started).total_seconds():.1f}s")
    return rows


def times_csv(rows: Sequence[SweepRow]) -> str:
    """``n,k,rep,overall_time_s`` table."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "k", "rep", "overall_time_s"])
    for r in rows:
        writer.writerow([r.n, r.k, r.rep, repr(r.overall_time)])
    return buf.getvalue()


def convergence_csv(rows: Sequence[SweepRow]) -> str:
    """Long-form ``n,k,rep,generation,best_length_m`` table."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "k", "rep", "generation", "best_length_m"])
    for r in rows:
        for g, length in enumerate(r.convergence, start=1):
            writer.writerow([r.n, r.k, r.rep, g, repr(length)])
    return buf.getvalue()

