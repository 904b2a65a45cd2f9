import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from funkgeom.body import Ball, GeometryError, HalfSpace, HPolytope
from funkgeom.finsler import (
    PathExitsBodyError,
    Polyline,
    QuadratureSpec,
    Sampled,
    TautologicalStructure,
    concat,
    infimum_estimate,
    lagrangian,
    path_length,
    path_length_report,
    random_polyline,
    segment_length_closed,
    structure_intersection,
)
from funkgeom.sampling import sample_interior

LOG2 = math.log(2)


def test_lagrangian_examples(disk, halfplane):
    S = TautologicalStructure(disk)
    assert lagrangian(S, [0, 0], [0, 1]) == pytest.approx(1.0, rel=1e-15)
    assert lagrangian(TautologicalStructure(halfplane), [0, 1], [0, -1]) == pytest.approx(1.0, rel=1e-15)
    assert lagrangian(S, [0.5, 0], [1, 0]) == pytest.approx(2.0, rel=1e-14)


def test_path_length_examples(disk, halfplane):
    S = TautologicalStructure(disk)
    assert path_length(S, Polyline([[0, 0], [0.5, 0]])) == pytest.approx(LOG2, rel=1e-6)
    assert path_length(S, Polyline([[0.2, 0.1], [0.2, 0.1]])) == 0.0
    assert path_length(halfplane, Polyline([[0, 2], [0, 1]])) == pytest.approx(LOG2, rel=1e-6)
    assert path_length(S, Polyline([[0, 0], [0.25, 0], [0.5, 0]])) == pytest.approx(LOG2, rel=1e-6)


def test_segment_length_closed_examples(disk, square, halfplane):
    assert segment_length_closed(TautologicalStructure(disk), [0, 0], [0.5, 0]) == pytest.approx(LOG2, abs=1e-15)
    assert segment_length_closed(TautologicalStructure(square), [0.5, 0.5], [0.75, 0.5]) == pytest.approx(
        LOG2, abs=1e-15)
    assert segment_length_closed(TautologicalStructure(halfplane), [0, 1], [0, 2]) == 0.0
    assert segment_length_closed(TautologicalStructure(halfplane), [0, 1], [5, 1]) == 0.0


def test_path_leaving_body_is_error(disk):
    with pytest.raises(PathExitsBodyError):
        path_length(disk, Polyline([[0, 0], [1.5, 0]]))


def test_polyline_needs_two_vertices():
    with pytest.raises(GeometryError):
        Polyline([[0, 0]])


def test_concat_checks_endpoints_and_adds(disk):
    a = Polyline([[0, 0], [0.25, 0]])
    b = Polyline([[0.25, 0], [0.5, 0.1]])
    with pytest.raises(GeometryError):
        concat(a, Polyline([[0.3, 0], [0.5, 0]]))
    S = TautologicalStructure(disk)
    assert path_length(S, concat(a, b)) == pytest.approx(path_length(S, a) + path_length(S, b), rel=1e-14)


def test_polyline_length_equals_sum_of_closed_forms(bounded_body, rng):
    S = TautologicalStructure(bounded_body)
    for _ in range(30):
        V = sample_interior(bounded_body, rng, 4, shrink=0.95)
        closed = math.fsum(segment_length_closed(S, a, b) for a, b in zip(V[:-1], V[1:]))
        assert path_length(S, Polyline(V)) == pytest.approx(closed, rel=1e-6)


def test_sampled_curve_density_invariance(disk):
    gamma = lambda t: np.array([0.5 * math.cos(t), 0.3 * math.sin(t)])
    dgamma = lambda t: np.array([-0.5 * math.sin(t), 0.3 * math.cos(t)])
    coarse = path_length(disk, Sampled.from_function(gamma, dgamma, 0.0, 2.0, n=257))
    fine = path_length(disk, Sampled.from_function(gamma, dgamma, 0.0, 2.0, n=513))
    assert abs(coarse - fine) <= 1e-6 * fine


def test_sampled_segment_matches_polyline(disk):
    x, y = np.array([-0.3, 0.2]), np.array([0.6, -0.1])
    samp = Sampled.from_function(lambda t: x + t * (y - x), lambda t: y - x, 0.0, 1.0, n=2049)
    assert path_length(disk, samp) == pytest.approx(path_length(disk, Polyline([x, y])), rel=1e-6)


def test_reparameterization_of_sampled_time(disk):
    x, y = np.array([-0.3, 0.2]), np.array([0.4, 0.1])
    a = Sampled.from_function(lambda t: x + t * (y - x), lambda t: y - x, 0.0, 1.0, n=1025)
    b = Sampled.from_function(lambda t: x + (t / 3) * (y - x), lambda t: (y - x) / 3, 0.0, 3.0, n=1025)
    assert path_length(disk, a) == pytest.approx(path_length(disk, b), rel=1e-12)


def test_length_report_halving_check(disk):
    rep = path_length_report(disk, Polyline([[0, 0], [0.99, 0]]))
    assert rep.rel_change < 1e-10
    assert rep.value == pytest.approx(math.log(100), rel=1e-9)


def test_monotone_under_inclusion(rng):
    inner, outer = Ball([0.0, 0.0], 1.0), Ball([0.1, 0.0], 1.5)
    Si, So = TautologicalStructure(inner), TautologicalStructure(outer)
    for _ in range(200):
        x, y = sample_interior(inner, rng, 2)
        gamma = random_polyline(inner, x, y, rng, 0.2)
        assert path_length(So, gamma) <= path_length(Si, gamma) + 1e-9


def test_infimum_examples(disk, halfplane):
    rep = infimum_estimate(TautologicalStructure(disk), [0, 0], [0.5, 0], trials=100, seed=0)
    assert rep.minimum >= LOG2 - 1e-9
    assert infimum_estimate(disk, [0.1, 0.1], [0.1, 0.1]).minimum == 0.0
    assert infimum_estimate(halfplane, [0, 1], [0, 2], trials=20).minimum == 0.0


def test_infimum_never_beats_closed_form(rng):
    for body in (Ball([0.0, 0.0], 1.0), HPolytope.box([0, 0], [1, 1])):
        for _ in range(5):
            x, y = sample_interior(body, rng, 2)
            rep = infimum_estimate(body, x, y, trials=40, seed=int(rng.integers(1000)))
            assert rep.minimum >= rep.closed_form - 1e-9


def test_structure_intersection_examples(disk):
    half = HalfSpace([0.0, 1.0], 0.5)
    S = structure_intersection(TautologicalStructure(disk), TautologicalStructure(half))
    assert S.lagrangian([0, 0], [0, 1]) == pytest.approx(2.0, rel=1e-15)
    same = structure_intersection(TautologicalStructure(disk), TautologicalStructure(disk))
    assert same.lagrangian([0.3, 0.2], [1, -1]) == TautologicalStructure(disk).lagrangian([0.3, 0.2], [1, -1])


@given(x=st.tuples(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6)),
       y=st.tuples(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6)))
def test_segment_quadrature_matches_closed_form(x, y):
    S = TautologicalStructure(Ball([0.0, 0.0], 1.0))
    closed = segment_length_closed(S, x, y)
    assert path_length(S, Polyline([x, y])) == pytest.approx(closed, rel=1e-6, abs=1e-15)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(subdivisions=0)
