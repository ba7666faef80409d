import math

import pytest

from cellsurvey.core.errors import DuplicateVisit
from cellsurvey.core.geometry import Point2D, closest_index, euclidean_distance, path_length

from .builders import point


def test_point_rejects_non_finite_coordinates():
    with pytest.raises(ValueError):
        Point2D(math.nan, 0.0)
    with pytest.raises(ValueError):
        Point2D(0.0, math.inf)


def test_euclidean_distance():
    assert euclidean_distance(Point2D(0, 0), Point2D(3, 4)) == 5.0


def test_open_path_has_no_return_leg():
    start = Point2D(0, 0)
    assert path_length(start, [point(1, 10, 0), point(2, 10, 10)]) == pytest.approx(20.0)
    assert path_length(start, [point(2, 10, 10), point(1, 10, 0)]) == pytest.approx(24.142, abs=1e-3)


def test_path_length_of_nothing_is_zero():
    assert path_length(Point2D(5, 5), []) == 0.0


def test_path_length_rejects_repeated_point():
    with pytest.raises(DuplicateVisit):
        path_length(Point2D(0, 0), [point(1, 1, 0), point(2, 2, 0), point(1, 1, 0)])


def test_closest_index_first_wins_ties():
    positions = [Point2D(2, 0), Point2D(-2, 0), Point2D(1, 0)]
    assert closest_index(Point2D(0, 0), positions) == 2
    assert closest_index(Point2D(0, 0), positions[:2]) == 0
    assert closest_index(Point2D(0, 0), []) == -1
