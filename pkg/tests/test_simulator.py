from dataclasses import replace

import pytest

from cellsurvey.core.campaign import Campaign
from cellsurvey.core.errors import EmptyBsTable
from cellsurvey.core.geometry import Point2D
from cellsurvey.planning.genetic import GAParams
from cellsurvey.protocol.checks import check_conversation, closest_bs_violations
from cellsurvey.sim.simulator import RunMode, SimConfig, run_campaign
from cellsurvey.sim.workload import sweep_campaign

from .builders import FAST_GA, four_stations, point, sensor_node, two_sensor_campaign


def _straight_line(dwell_s: float = 0.0) -> tuple[Campaign, SimConfig]:
    c = Campaign(
        area=(50_000.0, 50_000.0),
        sensors=(sensor_node(1, 0.0, 0.0, speed_kmh=30.0),),
        points=(point(1, 25_000.0, 0.0),),
        base_stations=four_stations(50_000.0, 50_000.0),
        seed=3,
    )
    return c, SimConfig(dwell_s=dwell_s)


def test_travel_time_follows_speed():
    c, config = _straight_line()
    report = run_campaign(c, FAST_GA, config=config)
    assert report.overall_time == pytest.approx(3000.0)
    assert report.total_distance[1] == pytest.approx(25_000.0)
    assert report.complete


def test_dwell_time_is_added_per_point():
    c, config = _straight_line(dwell_s=60.0)
    assert run_campaign(c, FAST_GA, config=config).overall_time == pytest.approx(3060.0)


def test_two_sensor_campaign_is_complete_and_well_formed():
    c = two_sensor_campaign()
    report = run_campaign(c, FAST_GA, config=SimConfig(latency_s=0.2, position_period_s=60.0))
    assert report.complete
    assert sorted(r.point_id for r in report.records) == [1, 2, 3, 4, 5, 6]
    assert report.sensor_count == 2
    assert set(report.per_sensor_time) == {1, 2}
    assert report.overall_time == max(report.per_sensor_time.values())
    assert report.notes == []
    assert check_conversation(report.trace) == []
    initial = {s.id: s.position for s in c.sensors}
    assert closest_bs_violations(report.trace, c.base_stations, initial) == []


def test_records_are_measured_at_the_points():
    c = two_sensor_campaign()
    report = run_campaign(c, FAST_GA)
    where = {p.id: p.position for p in c.points}
    for r in report.records:
        assert r.position == where[r.point_id]
        assert r.cell.cell_id in {bs.cell_id for bs in c.base_stations}


def test_runs_are_reproducible():
    c = two_sensor_campaign()
    a = run_campaign(c, FAST_GA)
    b = run_campaign(c, FAST_GA)
    assert [t.line for t in a.trace] == [t.line for t in b.trace]
    assert a.records == b.records


def test_duplicated_messages_change_nothing_measured():
    c = two_sensor_campaign()
    plain = run_campaign(c, FAST_GA)
    doubled = run_campaign(c, FAST_GA, config=SimConfig(duplicate_messages=True))
    assert doubled.complete
    assert sorted(doubled.records, key=lambda r: r.point_id) == sorted(plain.records, key=lambda r: r.point_id)
    assert doubled.per_sensor_time == plain.per_sensor_time
    assert check_conversation(doubled.trace) == []


def test_single_sensor_mode():
    c = two_sensor_campaign()
    report = run_campaign(c, FAST_GA, mode=RunMode.FORCE_SINGLE_SENSOR)
    assert report.mode == "single"
    assert report.sensor_count == 1
    assert report.complete
    assert set(report.per_sensor_time) == {1}


def test_sensor_without_points_is_idle():
    c = replace(two_sensor_campaign(), sensors=(sensor_node(1, 5000, 5000), sensor_node(2, 5000, 5000)))
    report = run_campaign(c, FAST_GA)
    assert report.complete
    assert report.per_sensor_time[2] == 0.0
    assert report.assigned[2] == []
    assert check_conversation(report.trace) == []


def test_cell_info_requests_can_be_disabled():
    c = two_sensor_campaign()
    with_requests = run_campaign(c, FAST_GA)
    without = run_campaign(c, FAST_GA, config=SimConfig(cell_info_requests=False))
    assert any('"kind":"CELL_INFO"' in t.line for t in with_requests.trace)
    assert not any('"kind":"CELL_INFO"' in t.line for t in without.trace)


def test_trace_can_be_switched_off():
    assert run_campaign(two_sensor_campaign(), FAST_GA, config=SimConfig(record_trace=False)).trace == []


def test_campaign_without_base_stations():
    with pytest.raises(EmptyBsTable):
        run_campaign(replace(two_sensor_campaign(), base_stations=()), FAST_GA)


def test_position_reports_are_periodic():
    c, _ = _straight_line()
    report = run_campaign(c, FAST_GA, config=SimConfig(position_period_s=100.0))
    positions = [t for t in report.trace if '"kind":"POSITION"' in t.line]
    assert 29 <= len(positions) <= 30
    assert positions[0].time == pytest.approx(100.0)


def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(dwell_s=-1.0)
    with pytest.raises(ValueError):
        SimConfig(position_period_s=0.0)


@pytest.mark.slow
def test_more_sensors_finish_sooner():
    c = sweep_campaign(100, 5, 0, base_seed=1, ks=(1, 5))
    ga = GAParams(population_size=60, generations=200, seed=1)
    five = run_campaign(c, ga)
    one = run_campaign(c, ga, mode=RunMode.FORCE_SINGLE_SENSOR)
    assert five.complete and one.complete
    assert five.overall_time < 0.6 * one.overall_time


def test_start_position_is_where_the_sensor_begins():
    c, config = _straight_line()
    moved = replace(c, sensors=(replace(c.sensors[0], position=Point2D(25_000.0, 0.0)),))
    assert run_campaign(moved, FAST_GA, config=config).overall_time == 0.0


@pytest.mark.parametrize("k", [3, 5, 8])
def test_closest_bs_holds_with_many_sensors(k):
    c = sweep_campaign(40, k, 0, base_seed=5, ks=(k,))
    for duplicate in (False, True):
        report = run_campaign(c, FAST_GA, config=SimConfig(duplicate_messages=duplicate))
        assert report.complete
        assert check_conversation(report.trace) == []
        initial = {s.id: s.position for s in c.sensors}
        assert closest_bs_violations(report.trace, c.base_stations, initial) == []
