from collections import Counter

import pytest
from scipy import stats

from cellsurvey.planning.genetic import GAParams
from cellsurvey.sim.sweep import convergence_csv, sweep, times_csv
from cellsurvey.sim.workload import generate_points, grid_base_stations, sweep_campaign

TINY_GA = GAParams(population_size=10, generations=5)
AREA = (5000.0, 5000.0)


def test_generated_points():
    points = generate_points(50, AREA, seed=4)
    assert [p.id for p in points] == list(range(1, 51))
    assert all(0 <= p.position.x <= 5000 and 0 <= p.position.y <= 5000 for p in points)
    assert points == generate_points(50, AREA, seed=4)
    assert points != generate_points(50, AREA, seed=5)
    with pytest.raises(ValueError):
        generate_points(0, AREA)


def test_grid_base_stations():
    stations = grid_base_stations((50_000.0, 50_000.0))
    assert len(stations) == 25
    assert [bs.cell_id for bs in stations] == list(range(100, 125))
    assert stations[0].position.as_tuple() == (5000.0, 5000.0)


def test_campaigns_differing_in_k_share_points_and_first_sensor():
    one = sweep_campaign(30, 1, 2, base_seed=9, ks=(1, 3), area=AREA)
    three = sweep_campaign(30, 3, 2, base_seed=9, ks=(1, 3), area=AREA)
    assert one.points == three.points
    assert one.sensors[0] == three.sensors[0]
    assert len(three.sensors) == 3
    assert one.seed == three.seed
    assert sweep_campaign(30, 1, 3, base_seed=9, ks=(1, 3), area=AREA).points != one.points


def test_sweep_rows():
    rows = sweep([6, 4], [2, 1], 2, base_seed=5, ga=TINY_GA, area=AREA)
    assert [(r.n, r.k, r.rep) for r in rows] == [
        (4, 1, 0), (4, 1, 1), (4, 2, 0), (4, 2, 1),
        (6, 1, 0), (6, 1, 1), (6, 2, 0), (6, 2, 1),
    ]
    assert all(r.records == r.n for r in rows)
    assert all(len(r.convergence) == TINY_GA.generations for r in rows)
    assert rows[0].seed == rows[2].seed


def test_sweep_is_reproducible():
    a = sweep([5], [1, 2], 1, base_seed=3, ga=TINY_GA, area=AREA)
    b = sweep([5], [1, 2], 1, base_seed=3, ga=TINY_GA, area=AREA)
    assert a == b


def test_sweep_edge_cases():
    assert sweep([5], [1], 0, base_seed=1, ga=TINY_GA) == []
    with pytest.raises(ValueError):
        sweep([], [1], 1, base_seed=1)
    with pytest.raises(ValueError):
        sweep([5], [], 1, base_seed=1)


def test_csv_tables():
    rows = sweep([4], [1], 1, base_seed=2, ga=GAParams(population_size=10, generations=3), area=AREA)
    times = times_csv(rows).splitlines()
    assert times[0] == "n,k,rep,overall_time_s"
    assert times[1].startswith("4,1,0,")
    convergence = convergence_csv(rows).splitlines()
    assert convergence[0] == "n,k,rep,generation,best_length_m"
    assert [line.split(",")[3] for line in convergence[1:]] == ["1", "2", "3"]


@pytest.mark.slow
def test_worker_processes_give_the_same_rows():
    serial = sweep([8], [1, 2], 2, base_seed=4, ga=TINY_GA, area=AREA)
    parallel = sweep([8], [1, 2], 2, base_seed=4, ga=TINY_GA, area=AREA, jobs=2)
    assert parallel == serial


@pytest.mark.parametrize("seed", range(5))
def test_generated_points_fill_quadrants_evenly(seed):
    n = 4000
    points = generate_points(n, AREA, seed=seed)
    low, high = stats.binom.interval(0.9999, n, 0.25)
    quadrants = Counter((p.position.x >= AREA[0] / 2, p.position.y >= AREA[1] / 2) for p in points)
    assert len(quadrants) == 4
    for count in quadrants.values():
        assert low <= count <= high
