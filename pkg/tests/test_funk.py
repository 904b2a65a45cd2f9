import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from conftest import BODIES
from funkgeom.body import Ball, GeometryError, HalfSpace, HPolytope, OutsideBodyError, affine_slice
from funkgeom.bodyio import load_body
from funkgeom.catalog import lens, unit_cube
from funkgeom.funk import (
    backward_sphere,
    backward_sphere_is_compact,
    ball_convexity_probe,
    chain_defect,
    convergence_probe,
    forward_sphere,
    funk,
    funk_distance,
    funk_halfspace_oracle,
    funk_intersection_check,
    funk_many,
    funk_upper_halfplane,
    is_geodesic_chain,
    polygonal_geodesic_witness,
    strict_triangle_check,
    support_lower_bound,
)
from funkgeom.sampling import sample_interior

LOG2 = math.log(2)

# 60-digit bisection oracle values (tests/oracle.py), rounded to 17 digits
FROZEN = [
    ("disk", (0.0, 0.0), (0.5, 0.0), 0.69314718055994531),
    ("disk", (0.5, 0.0), (0.0, 0.0), 0.40546510810816438),
    ("square", (0.5, 0.5), (0.75, 0.5), 0.69314718055994531),
    ("lens", (0.1, 0.2), (-0.3, -0.1), 1.1967389050784395),
    ("lens", (-0.3, -0.1), (0.1, 0.2), 0.84005594990875674),
    ("disk", (-0.5, 0.0), (0.0, 0.3), 0.54121927436003957),
    ("disk", (0.0, 0.3), (0.5, 0.0), 0.73459066734057917),
    ("disk", (-0.5, 0.0), (0.5, 0.0), 1.0986122886681097),
]
# offsets from the witness (polygon) or centre (ellipse)
FROZEN_RELATIVE = [
    ("polygon12", (0.0, 0.0), (0.3, 0.2), 0.44346716800774268),
    ("polygon12", (0.3, 0.2), (0.0, 0.0), 0.34552968030732356),
    ("ellipse", (0.0, 0.0), (0.3, -0.2), 0.38802872536287534),
    ("ellipse", (0.3, -0.2), (0.0, 0.0), 0.27884852941217497),
]


@pytest.mark.parametrize("name, x, y, expected", FROZEN)
def test_frozen_oracle_values(name, x, y, expected):
    assert funk(load_body(BODIES / f"{name}.json"), x, y) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("name, dx, dy, expected", FROZEN_RELATIVE)
def test_frozen_oracle_values_relative(name, dx, dy, expected):
    body = load_body(BODIES / f"{name}.json")
    base = body.center if name == "ellipse" else body.witness
    assert funk(body, base + dx, base + dy) == pytest.approx(expected, abs=1e-14)


def test_oracle_reproduces_a_frozen_value():
    ref = oracle.funk(oracle.from_file(BODIES / "lens.json"), [0.1, 0.2], [-0.3, -0.1])
    assert float(ref) == pytest.approx(1.1967389050784395, abs=1e-16)


def test_funk_distance_examples(disk, halfplane):
    r = funk_distance(disk, [0, 0], [0.5, 0])
    assert r.value == pytest.approx(LOG2, abs=1e-15)
    assert np.allclose(r.boundary_point, [1, 0], atol=1e-15)
    assert funk(halfplane, [0, 2], [0, 1]) == pytest.approx(LOG2, abs=1e-12)
    assert funk(halfplane, [0, 1], [0, 2]) == 0.0
    assert funk_distance(disk, [0.3, 0.2], [0.3, 0.2]).boundary_point is None


def test_outside_points_rejected(disk):
    with pytest.raises(OutsideBodyError):
        funk(disk, [0, 0], [1, 0])


def test_upper_halfplane_formula():
    assert funk_upper_halfplane((0, 2), (0, 1)) == pytest.approx(LOG2, abs=1e-15)
    assert funk_upper_halfplane((0, 1), (5, 1)) == 0.0
    assert funk_upper_halfplane((3, 1), (7, 4)) == 0.0


@given(x=st.tuples(st.floats(-50, 50), st.floats(1e-3, 50)),
       y=st.tuples(st.floats(-50, 50), st.floats(1e-3, 50)))
def test_halfplane_engine_matches_formula(x, y):
    H = HalfSpace([0.0, -1.0], 0.0)
    assert funk(H, x, y) == pytest.approx(funk_upper_halfplane(x, y), abs=1e-12)


@given(th=st.floats(0, 2 * math.pi), s=st.floats(-3, 3),
       a=st.tuples(st.floats(-5, 5), st.floats(-5, 5)), b=st.tuples(st.floats(-5, 5), st.floats(-5, 5)))
def test_rotated_halfspace_matches_oracle(th, s, a, b):
    nu = np.array([math.cos(th), math.sin(th)])
    H = HalfSpace(nu, s)
    if not (H.contains(np.array(a)) and H.contains(np.array(b))):
        return
    assert funk(H, a, b) == pytest.approx(funk_halfspace_oracle(nu, s, a, b), abs=1e-12)


# --- axioms -----------------------------------------------------------------


def test_weak_metric_axioms(any_body, rng):
    X, Y, Z = (sample_interior(any_body, rng, 3000) for _ in range(3))
    assert np.all(funk_many(any_body, X, X) == 0.0)
    fxy, fyz, fxz = funk_many(any_body, X, Y), funk_many(any_body, Y, Z), funk_many(any_body, X, Z)
    assert fxy.min() >= 0.0
    assert np.all(fxz <= fxy + fyz + 1e-9)


def test_funk_many_matches_scalar(bounded_body, rng):
    X, Y = sample_interior(bounded_body, rng, 50), sample_interior(bounded_body, rng, 50)
    vec = funk_many(bounded_body, X, Y)
    assert np.allclose(vec, [funk(bounded_body, x, y) for x, y in zip(X, Y)], rtol=0, atol=1e-13)


def test_asymmetry_in_halfplane(halfplane):
    assert funk(halfplane, [0, 2], [0, 1]) != funk(halfplane, [0, 1], [0, 2])


def test_support_lower_bound(bounded_body, rng):
    X, Y = sample_interior(bounded_body, rng, 200), sample_interior(bounded_body, rng, 200)
    for x, y in zip(X, Y):
        f, h = support_lower_bound(bounded_body, x, y)
        assert f >= h - 1e-9


# --- geodesics ----------------------------------------------------------------


def test_chain_examples(disk):
    assert is_geodesic_chain(disk, [[0, 0], [0.25, 0], [0.5, 0]])
    E = load_body(BODIES / "ellipse.json")
    c = E.center
    assert not is_geodesic_chain(E, [c + [-0.3, 0], c + [0, 0.3], c + [0.3, 0]])


def test_polygonal_witness_example(square):
    path = polygonal_geodesic_witness(square, [0.25, 0.75], [0.75, 0.75], facet=0)
    y = path.vertices[1]
    assert np.allclose(y, [0.5, 0.5625], atol=1e-15)
    assert is_geodesic_chain(square, path.vertices)
    assert abs(chain_defect(square, path.vertices)) < 1e-9
    # the bent path is not the straight segment
    assert abs(y[1] - 0.75) > 0.1


def test_polygonal_witness_oracle_chain(square):
    S = oracle.from_file(BODIES / "square.json")
    x, y, z = [0.25, 0.75], [0.5, 0.5625], [0.75, 0.75]
    defect = oracle.funk(S, x, y) + oracle.funk(S, y, z) - oracle.funk(S, x, z)
    assert abs(float(defect)) < 1e-40


def test_polygonal_witness_rejects_wrong_facet_and_disk(square, disk):
    with pytest.raises(GeometryError):
        polygonal_geodesic_witness(square, [0.25, 0.75], [0.75, 0.75], facet=3)
    with pytest.raises(GeometryError):
        polygonal_geodesic_witness(disk, [0, 0], [0.5, 0], facet=0)


def test_collinear_point_is_trivial_chain(square):
    assert is_geodesic_chain(square, [[0.25, 0.75], [0.5, 0.75], [0.75, 0.75]])


@given(s=st.floats(0.0, 1.0), a=st.tuples(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6)),
       b=st.tuples(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6)))
def test_collinear_additivity_disk(s, a, b):
    D = Ball([0.0, 0.0], 1.0)
    a, b = np.array(a), np.array(b)
    y = a + s * (b - a)
    assert abs(funk(D, a, y) + funk(D, y, b) - funk(D, a, b)) <= 1e-9


def test_strict_triangle_examples(disk, square):
    assert strict_triangle_check(disk, [-0.5, 0], [0, 0.3], [0.5, 0])
    # frozen oracle gap
    gap = funk(disk, [-0.5, 0], [0, 0.3]) + funk(disk, [0, 0.3], [0.5, 0]) - funk(disk, [-0.5, 0], [0.5, 0])
    assert gap == pytest.approx(0.17719765303250904, abs=1e-14)
    with pytest.raises(GeometryError):
        strict_triangle_check(disk, [-0.5, 0], [0, 0], [0.5, 0])
    with pytest.raises(GeometryError):
        strict_triangle_check(square, [0.2, 0.2], [0.5, 0.8], [0.8, 0.2])


# --- spheres ------------------------------------------------------------------


def test_forward_sphere_disk(disk):
    s = forward_sphere(disk, [0, 0], LOG2, 720)
    assert len(s.points) == 720 and not s.truncated
    assert np.allclose(np.linalg.norm(s.points, axis=1), 0.5, rtol=0, atol=1e-12)
    z = forward_sphere(disk, [0.2, 0.1], 0.0, 64)
    assert np.all(z.points == [0.2, 0.1])


def test_forward_sphere_square_is_scaled_square(square):
    s = forward_sphere(square, [0.5, 0.5], LOG2, 720)
    cheb = np.abs(s.points - 0.5).max(axis=1)
    assert np.allclose(cheb, 0.25, atol=1e-12)


def test_forward_sphere_halfplane_truncated(halfplane):
    s = forward_sphere(halfplane, [0, 1], 1.0, 360)
    assert s.truncated and s.skipped > 0
    assert np.allclose(funk_many(halfplane, np.broadcast_to([0, 1], s.points.shape), s.points), 1.0, atol=1e-9)


def test_backward_sphere_examples(disk):
    s = backward_sphere(disk, [0, 0], math.log(1.5), 720)
    assert not s.truncated and len(s.points) == 720
    assert np.allclose(np.linalg.norm(s.points, axis=1), 0.5, atol=1e-12)
    s = backward_sphere(disk, [0, 0], LOG2, 720)
    assert s.truncated and len(s.points) == 0
    z = backward_sphere(disk, [0.1, 0.0], 0.0, 16)
    assert np.all(z.points == [0.1, 0.0])


def test_backward_sphere_offcentre(disk):
    s = backward_sphere(disk, [0.5, 0], LOG2, 4)  # directions +x, +y, -x, -y
    kept = {tuple(np.round(p, 12)) for p in s.points}
    assert (0.0, 0.0) in kept
    assert (2.0, 0.0) not in kept and s.truncated
    assert np.allclose(funk_many(disk, s.points, np.broadcast_to([0.5, 0], s.points.shape)), LOG2, atol=1e-9)


def test_backward_compactness_flips(disk):
    assert backward_sphere_is_compact(disk, [0, 0], math.log(1.5))
    assert not backward_sphere_is_compact(disk, [0, 0], math.log(2.5))
    assert backward_sphere_is_compact(disk, [0, 0], 0.0)


def test_forward_balls_geodesically_convex(disk, rng):
    E = load_body(BODIES / "ellipse.json")
    for body, x in ((disk, np.array([0.3, -0.2])), (E, E.center)):
        for delta in (0.1, LOG2, 2.0):
            assert ball_convexity_probe(body, x, delta, rng, pairs=50)


# --- intersections, slices, convergence ---------------------------------------


def test_intersection_examples(rng):
    A, B = Ball([-0.5, 0.0], 1.0), Ball([0.5, 0.0], 1.0)
    for x, y in zip(sample_interior(lens(), rng, 50), sample_interior(lens(), rng, 50)):
        lhs, rhs = funk_intersection_check(A, B, x, y)
        assert abs(lhs - rhs) <= 1e-9
    small, big = Ball([0.0, 0.0], 1.0), Ball([0.0, 0.0], 2.0)
    lhs, rhs = funk_intersection_check(small, big, [0.1, 0], [0.3, 0.2])
    assert lhs == pytest.approx(funk(small, [0.1, 0], [0.3, 0.2]), abs=1e-12)
    lhs, rhs = funk_intersection_check(small, small, [0.1, 0], [0.3, 0.2])
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_slice_consistency(rng):
    for body in (Ball([0.0, 0.0, 0.0], 1.0), unit_cube()):
        base = body.witness + 0.1
        frame = np.linalg.qr(rng.standard_normal((3, 2)))[0].T
        sl = affine_slice(body, base, frame)
        U, V = sample_interior(sl, rng, 30, shrink=0.9), sample_interior(sl, rng, 30, shrink=0.9)
        for u, v in zip(U, V):
            assert funk(sl, u, v) == pytest.approx(funk(body, base + u @ frame, base + v @ frame), abs=1e-9)


def test_convergence_examples(disk):
    seq = [np.array([1 - 2.0 ** -n, 0.0]) for n in range(1, 41)]
    for n, xn in enumerate(seq, start=1):
        assert funk(disk, [0, 0], xn) == pytest.approx(n * LOG2, abs=1e-9)
        assert funk(disk, xn, [0, 0]) == pytest.approx(math.log(2 - 2.0 ** -n), abs=1e-12)
    rep = convergence_probe(disk, [0.1, 0.0], [np.array([0.1 + 2.0 ** -n, 0.0]) for n in range(1, 40)])
    assert rep.consistent and rep.forward[-1] < 1e-9 and rep.backward[-1] < 1e-9
    const = convergence_probe(disk, [0.1, 0.0], [np.array([0.1, 0.0])] * 3)
    assert const.forward_max == 0.0 and const.backward_max == 0.0


def test_convergence_probe_needs_bounded_body(halfplane):
    with pytest.raises(GeometryError):
        convergence_probe(halfplane, [0, 1], [np.array([0, 2.0])])
