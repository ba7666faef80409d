"""
Visiting-order optimisation for one mobile sensor.

The sensor starts at its current position and must visit every assigned
measurement point once, with no return leg (an open, "delivery" travelling
salesman path). Candidate orders are permutations evolved by a genetic
algorithm: tournament selection, cycle crossover, swap mutation and elitism.
All randomness comes from one ``numpy.random.Generator`` over PCG64, so a
seed reproduces a run bit for bit on any platform.
"""
import csv
import io
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from cellsurvey.core.campaign import MeasurementPoint
from cellsurvey.core.errors import (DuplicateVisit, EmptyPointSet, InvalidParameter,
                                    MismatchedIdSets, TooManyPoints)
from cellsurvey.core.geometry import Point2D, euclidean_distance, path_length

BRUTE_FORCE_LIMIT = 10


@dataclass(frozen=True, slots=True)
class GAParams:
    population_size: int = 100
    generations: int = 500
    crossover_rate: float = 0.9
    mutation_rate: float = 0.02
    elite_count: int = 2
    tournament_size: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 2:
            raise InvalidParameter(f"population_size must be >= 2, got {self.population_size}")
        if self.generations < 0:
            raise InvalidParameter(f"generations must be >= 0, got {self.generations}")
        for name in ("crossover_rate", "mutation_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise InvalidParameter(f"{name} must be within [0, 1], got {rate}")
        if not 0 <= self.elite_count < self.population_size:
            raise InvalidParameter(f"elite_count must be in [0, population_size), got {self.elite_count}")
        if self.tournament_size < 1:
            raise InvalidParameter(f"tournament_size must be >= 1, got {self.tournament_size}")
        if not 0 <= self.seed < 2**64:
            raise InvalidParameter(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True, slots=True)
class Individual:
    """A candidate visiting order; ``cached_length`` is None until evaluated."""
    order: tuple[int, ...]
    cached_length: Optional[float] = None


@dataclass(frozen=True, slots=True)
class Route:
    start: Point2D
    points: tuple[MeasurementPoint, ...]
    length: float
    sensor_id: Optional[int] = None

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(p.id for p in self.points)

    @property
    def positions(self) -> tuple[Point2D, ...]:
        return tuple(p.position for p in self.points)


@dataclass(frozen=True, slots=True)
class ConvergenceTrace:
    best_lengths: tuple[float, ...]   # entry g-1 = best-ever length after generation g

    def __len__(self) -> int:
        return len(self.best_lengths)

    def at(self, generation: int) -> float:
        return self.best_lengths[generation - 1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["generation", "best_length_m"])
        for g, length in enumerate(self.best_lengths, start=1):
            writer.writerow([g, repr(length)])
        return buf.getvalue()


def fitness(start: Point2D, ind: Individual,
            points: Optional[Mapping[int, MeasurementPoint]] = None) -> float:
    """Score in (0, 1]; shorter paths score strictly higher."""
    length = ind.cached_length
    if length is None:
        if points is None:
            raise ValueError("individual has no cached length and no points to evaluate it")
        length = path_length(start, (points[i] for i in ind.order))
    return 1.0 / (1.0 + length)


# Operator kernels work on index arrays; the public wrappers map ids onto them.

def _cycle_crossover(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = len(a)
    where_in_a = np.empty(n, dtype=np.intp)
    where_in_a[a] = np.arange(n)
    child1, child2 = b.copy(), a.copy()
    visited = np.zeros(n, dtype=bool)
    from_first = True
    for start in range(n):
        if visited[start]:
            continue
        i = start
        while not visited[i]:
            visited[i] = True
            if from_first:
                child1[i] = a[i]
                child2[i] = b[i]
            i = where_in_a[b[i]]
        from_first = not from_first
    return child1, child2


def _swap_mutation(order: np.ndarray, rate: float, rng: np.random.Generator) -> np.ndarray:
    out = order.copy()
    n = len(out)
    if n < 2:
        return out
    hits = np.flatnonzero(rng.random(n) < rate)
    moved = np.zeros(n, dtype=bool)
    for i in hits:
        if moved[i]:
            continue
        j = int(rng.integers(n - 1))
        if j >= i:
            j += 1
        out[i], out[j] = out[j], out[i]
        moved[i] = moved[j] = True
    return out


def _as_index_arrays(p1: Individual, p2: Individual) -> tuple[list[int], np.ndarray, np.ndarray]:
    ids = sorted(p1.order)
    if len(set(p1.order)) != len(p1.order) or ids != sorted(p2.order):
        raise MismatchedIdSets("parents are not permutations of the same id set")
    index = {pid: i for i, pid in enumerate(ids)}
    a = np.array([index[pid] for pid in p1.order], dtype=np.intp)
    b = np.array([index[pid] for pid in p2.order], dtype=np.intp)
    return ids, a, b


def cycle_crossover(p1: Individual, p2: Individual,
                    rng: np.random.Generator) -> tuple[Individual, Individual]:
    """
    Cycle crossover (CX) starting from position 0.

    Each child keeps every allele in its absolute position: odd-numbered cycles
    come from one parent and even-numbered ones from the other. ``rng`` is
    accepted for operator-interface symmetry; CX itself is deterministic.
    """
    ids, a, b = _as_index_arrays(p1, p2)
    c1, c2 = _cycle_crossover(a, b)
    return (Individual(tuple(ids[i] for i in c1)), Individual(tuple(ids[i] for i in c2)))


def mutate(ind: Individual, rate: float, rng: np.random.Generator) -> Individual:
    """Swap mutation: each position is swapped with a random other position with probability ``rate``."""
    if not 0.0 <= rate <= 1.0:
        raise InvalidParameter(f"mutation rate must be within [0, 1], got {rate}")
    ids = list(ind.order)
    out = _swap_mutation(np.arange(len(ids)), rate, rng)
    order = tuple(ids[i] for i in out)
    return ind if order == ind.order else Individual(order)


class _RouteProblem:
    """Distance tables for one start position and point set."""

    def __init__(self, start: Point2D, points: Sequence[MeasurementPoint]):
        coords = np.array([[p.position.x, p.position.y] for p in points], dtype=float)
        self.points = tuple(points)
        self.start = start
        self.from_start = cdist(np.array([[start.x, start.y]]), coords)[0]
        self.between = cdist(coords, coords)

    def lengths(self, population: np.ndarray) -> np.ndarray:
        legs = self.between[population[:, :-1], population[:, 1:]].sum(axis=1)
        return self.from_start[population[:, 0]] + legs


def _tournament(lengths: np.ndarray, size: int, rng: np.random.Generator) -> int:
    entrants = rng.integers(len(lengths), size=size)
    return int(entrants[np.argmin(lengths[entrants])])


def optimize_route(start: Point2D, points: Sequence[MeasurementPoint],
                   params: GAParams = GAParams(),
                   sensor_id: Optional[int] = None) -> tuple[Route, ConvergenceTrace]:
    """
    Evolve a short open visiting path over ``points`` from ``start``.

    Returns the best order ever seen (elites survive unchanged, so it is also
    in the final population) and the per-generation best-ever lengths.

    Raises:
        EmptyPointSet: nothing to visit
        DuplicateVisit: a point id appears twice
    """
    if not points:
        raise EmptyPointSet("no measurement points to route")
    if len({p.id for p in points}) != len(points):
        raise DuplicateVisit("measurement point ids repeat in the routing input")

    problem = _RouteProblem(start, points)
    n = len(points)
    rng = np.random.Generator(np.random.PCG64(params.seed))

    population = np.stack([rng.permutation(n) for _ in range(params.population_size)])
    lengths = problem.lengths(population)
    best = int(np.argmin(lengths))
    best_order, best_length = population[best].copy(), float(lengths[best])

    history: list[float] = []
    for _ in range(params.generations):
        elites = np.argsort(lengths, kind="stable")[:params.elite_count]
        offspring = [population[i].copy() for i in elites]
        while len(offspring) < params.population_size:
            a = population[_tournament(lengths, params.tournament_size, rng)]
            b = population[_tournament(lengths, params.tournament_size, rng)]
            if rng.random() < params.crossover_rate:
                c1, c2 = _cycle_crossover(a, b)
            else:
                c1, c2 = a.copy(), b.copy()
            offspring.append(_swap_mutation(c1, params.mutation_rate, rng))
            if len(offspring) < params.population_size:
                offspring.append(_swap_mutation(c2, params.mutation_rate, rng))

        population = np.stack(offspring)
        lengths = problem.lengths(population)
        best = int(np.argmin(lengths))
        if lengths[best] < best_length:
            best_order, best_length = population[best].copy(), float(lengths[best])
        history.append(best_length)

    ordered = tuple(points[i] for i in best_order)
    route = Route(start=start, points=ordered, length=path_length(start, ordered), sensor_id=sensor_id)
    return route, ConvergenceTrace(tuple(history))


def brute_force_route(start: Point2D, points: Sequence[MeasurementPoint],
                      limit: int = BRUTE_FORCE_LIMIT) -> Route:
    """
    Exact shortest open path by exhaustive search over visiting orders.

    Orders are explored depth first in increasing id order and only strictly
    shorter paths replace the incumbent, so ties resolve to the
    lexicographically smallest id sequence. Branches already longer than the
    incumbent are cut, which never discards an optimum.

    Raises:
        TooManyPoints: more than ``limit`` points
    """
    if len(points) > limit:
        raise TooManyPoints(f"exhaustive search limited to {limit} points, got {len(points)}")
    if len({p.id for p in points}) != len(points):
        raise DuplicateVisit("measurement point ids repeat in the routing input")
    pool = sorted(points, key=lambda p: p.id)
    if not pool:
        return Route(start=start, points=(), length=0.0)

    best_length = float("inf")
    best_order: list[MeasurementPoint] = []
    used = [False] * len(pool)
    chosen: list[MeasurementPoint] = []

    def search(here: Point2D, so_far: float) -> None:
        nonlocal best_length, best_order
        if so_far > best_length:
            return
        if len(chosen) == len(pool):
            if so_far < best_length:
                best_length, best_order = so_far, list(chosen)
            return
        for i, point in enumerate(pool):
            if used[i]:
                continue
            used[i] = True
            chosen.append(point)
            search(point.position, so_far + euclidean_distance(here, point.position))
            chosen.pop()
            used[i] = False

    search(start, 0.0)
    return Route(start=start, points=tuple(best_order), length=best_length)
