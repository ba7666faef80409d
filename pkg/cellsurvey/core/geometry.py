import math
from dataclasses import dataclass
from typing import Iterable, Protocol

from cellsurvey.core.errors import DuplicateVisit


@dataclass(frozen=True, slots=True)
class Point2D:
    """Planar position in meters (easting, northing) on a local tangent plane."""
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)

    def __str__(self) -> str:
        return f"({self.x:.1f}, {self.y:.1f})"


class Positioned(Protocol):
    id: int
    position: Point2D


def euclidean_distance(a: Point2D, b: Point2D) -> float:
    """Straight-line distance in meters."""
    return math.hypot(a.x - b.x, a.y - b.y)


def path_length(start: Point2D, order: Iterable[Positioned]) -> float:
    """
    Length of the open path that leaves ``start`` and visits ``order`` in sequence.

    There is no return leg. Raises DuplicateVisit if a point id repeats.
    """
    total = 0.0
    here = start
    seen: set[int] = set()
    for point in order:
        if point.id in seen:
            raise DuplicateVisit(f"measurement point {point.id} visited twice")
        seen.add(point.id)
        total += euclidean_distance(here, point.position)
        here = point.position
    return total


def closest_index(target: Point2D, positions: list[Point2D]) -> int:
    """Index of the position nearest to ``target``; the first one wins ties."""
    best_index = -1
    best_distance = math.inf
    for index, position in enumerate(positions):
        distance = euclidean_distance(target, position)
        if distance < best_distance:
            best_index = index
            best_distance = distance
    return best_index
