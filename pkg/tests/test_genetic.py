import numpy as np
import pytest

from cellsurvey.core.errors import DuplicateVisit, EmptyPointSet, InvalidParameter, MismatchedIdSets, TooManyPoints
from cellsurvey.core.geometry import Point2D, path_length
from cellsurvey.planning.genetic import (ConvergenceTrace, GAParams, Individual, brute_force_route, cycle_crossover,
                                         fitness, mutate, optimize_route)
from cellsurvey.sim.workload import generate_points

from .builders import FAST_GA, point


def _rng(seed: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def test_cycle_crossover_reference_case():
    c1, c2 = cycle_crossover(Individual((1, 2, 3, 4, 5)), Individual((3, 4, 1, 5, 2)), _rng())
    assert c1.order == (1, 4, 3, 5, 2)
    assert c2.order == (3, 2, 1, 4, 5)


def test_cycle_crossover_keeps_positions_from_a_parent():
    rng = _rng(3)
    p1 = Individual(tuple(int(i) for i in rng.permutation(12) + 1))
    p2 = Individual(tuple(int(i) for i in rng.permutation(12) + 1))
    for child in cycle_crossover(p1, p2, rng):
        assert sorted(child.order) == list(range(1, 13))
        assert all(g in (a, b) for g, a, b in zip(child.order, p1.order, p2.order))


def test_cycle_crossover_of_identical_parents():
    p = Individual((4, 2, 9, 7))
    c1, c2 = cycle_crossover(p, p, _rng())
    assert c1.order == c2.order == p.order


def test_cycle_crossover_rejects_different_id_sets():
    with pytest.raises(MismatchedIdSets):
        cycle_crossover(Individual((1, 2, 3)), Individual((1, 2, 4)), _rng())
    with pytest.raises(MismatchedIdSets):
        cycle_crossover(Individual((1, 1, 2)), Individual((1, 2, 1)), _rng())


def test_mutation():
    ind = Individual(tuple(range(1, 21)))
    assert mutate(ind, 0.0, _rng()) is ind
    mutated = mutate(ind, 1.0, _rng())
    assert sorted(mutated.order) == list(ind.order)
    assert mutated.order != ind.order
    with pytest.raises(InvalidParameter):
        mutate(ind, 1.5, _rng())


def test_fitness_prefers_shorter_paths():
    start = Point2D(0, 0)
    points = {1: point(1, 10, 0), 2: point(2, 10, 10)}
    short = fitness(start, Individual((1, 2)), points)
    long = fitness(start, Individual((2, 1)), points)
    assert short == pytest.approx(1 / 21)
    assert short > long
    assert fitness(start, Individual((1,), cached_length=0.0)) == 1.0
    with pytest.raises(ValueError):
        fitness(start, Individual((1, 2)))


@pytest.mark.parametrize("kwargs", [
    {"population_size": 1},
    {"generations": -1},
    {"mutation_rate": 1.5},
    {"crossover_rate": -0.1},
    {"elite_count": 100},
    {"tournament_size": 0},
    {"seed": -1},
])
def test_ga_params_validation(kwargs):
    with pytest.raises(InvalidParameter):
        GAParams(**kwargs)


def test_optimize_route_is_reproducible():
    points = generate_points(15, (1000.0, 1000.0), seed=2)
    a, trace_a = optimize_route(Point2D(0, 0), points, FAST_GA, sensor_id=4)
    b, trace_b = optimize_route(Point2D(0, 0), points, FAST_GA, sensor_id=4)
    assert a == b
    assert trace_a == trace_b
    assert a.sensor_id == 4


def test_optimize_route_visits_every_point_once():
    points = generate_points(15, (1000.0, 1000.0), seed=2)
    route, trace = optimize_route(Point2D(500, 500), points, FAST_GA)
    assert sorted(route.ids) == sorted(p.id for p in points)
    assert route.length == pytest.approx(path_length(route.start, route.points))
    assert len(trace) == FAST_GA.generations
    assert all(b <= a for a, b in zip(trace.best_lengths, trace.best_lengths[1:]))
    assert trace.at(FAST_GA.generations) == pytest.approx(route.length)


def test_optimize_route_without_generations():
    points = generate_points(5, (100.0, 100.0), seed=1)
    route, trace = optimize_route(Point2D(0, 0), points, GAParams(population_size=4, generations=0))
    assert len(trace) == 0
    assert sorted(route.ids) == [1, 2, 3, 4, 5]


def test_single_point_route():
    route, _ = optimize_route(Point2D(0, 0), [point(9, 3, 4)], FAST_GA)
    assert route.ids == (9,)
    assert route.length == 5.0


def test_optimize_route_rejects_bad_input():
    with pytest.raises(EmptyPointSet):
        optimize_route(Point2D(0, 0), [], FAST_GA)
    with pytest.raises(DuplicateVisit):
        optimize_route(Point2D(0, 0), [point(1, 0, 0), point(1, 1, 1)], FAST_GA)


def test_convergence_csv():
    csv = ConvergenceTrace((30.0, 25.5)).to_csv()
    assert csv == "generation,best_length_m\n1,30.0\n2,25.5\n"


def test_brute_force_finds_the_shorter_order():
    route = brute_force_route(Point2D(0, 0), [point(2, 10, 10), point(1, 10, 0)])
    assert route.ids == (1, 2)
    assert route.length == pytest.approx(20.0)


def test_brute_force_ties_resolve_to_smallest_ids():
    route = brute_force_route(Point2D(0, 0), [point(2, -1, 0), point(1, 1, 0)])
    assert route.ids == (1, 2)
    assert route.length == pytest.approx(3.0)


def test_brute_force_limits():
    assert brute_force_route(Point2D(0, 0), []).length == 0.0
    with pytest.raises(TooManyPoints):
        brute_force_route(Point2D(0, 0), generate_points(11, (100.0, 100.0), seed=0))


@pytest.mark.slow
def test_ga_matches_the_exhaustive_optimum_on_small_instances():
    rng = _rng(11)
    near = 0
    for seed in range(30):
        n = 5 + seed % 5
        points = generate_points(n, (10_000.0, 10_000.0), seed=seed)
        start = Point2D(float(rng.uniform(0, 10_000.0)), float(rng.uniform(0, 10_000.0)))
        best = brute_force_route(start, points)
        route, _ = optimize_route(start, points, GAParams(seed=seed))
        assert route.length >= best.length - 1e-6
        near += route.length <= 1.02 * best.length
    assert near >= 27


@pytest.mark.slow
def test_ga_improves_over_generations():
    points = generate_points(50, (50_000.0, 50_000.0), seed=9)
    _, trace = optimize_route(Point2D(0, 0), points, GAParams(seed=9))
    assert len(trace) == 500
    assert trace.at(500) < 0.9 * trace.at(1)


@pytest.mark.slow
def test_ga_is_near_its_final_length_by_generation_130():
    settled = 0
    for seed in range(10):
        points = generate_points(50, (50_000.0, 50_000.0), seed=100 + seed)
        _, trace = optimize_route(Point2D(0, 0), points, GAParams(generations=1000, seed=seed))
        settled += trace.at(130) <= 1.10 * trace.at(1000)
    assert settled >= 8


def _random_parents(rng: np.random.Generator) -> tuple[Individual, Individual]:
    n = int(rng.integers(1, 30))
    ids = rng.choice(10_000, size=n, replace=False)
    return (Individual(tuple(int(i) for i in rng.permutation(ids))),
            Individual(tuple(int(i) for i in rng.permutation(ids))))


def test_cycle_crossover_properties_on_random_parents():
    rng = _rng(21)
    for _ in range(10_000):
        p1, p2 = _random_parents(rng)
        c1, c2 = cycle_crossover(p1, p2, rng)
        assert sorted(c1.order) == sorted(c2.order) == sorted(p1.order)
        where = {g: i for i, g in enumerate(p1.order)}
        for i, (x, y, a, b) in enumerate(zip(c1.order, c2.order, p1.order, p2.order)):
            # children split every position between the parents
            assert {x, y} == {a, b}
            # a whole cycle is inherited from the same parent
            j = where[b]
            assert (x == a) == (c1.order[j] == p1.order[j]) or a == b


def test_swap_mutation_properties_on_random_orders():
    rng = _rng(22)
    for _ in range(10_000):
        ind, _ = _random_parents(rng)
        rate = float(rng.choice([0.0, 0.02, 0.3, 1.0]))
        out = mutate(ind, rate, rng)
        assert sorted(out.order) == sorted(ind.order)
        where = {g: i for i, g in enumerate(ind.order)}
        changed = [i for i, (a, b) in enumerate(zip(ind.order, out.order)) if a != b]
        # disjoint pairwise swaps
        assert len(changed) % 2 == 0
        for i in changed:
            assert out.order[where[out.order[i]]] == ind.order[i]
        if rate == 0.0:
            assert out is ind
