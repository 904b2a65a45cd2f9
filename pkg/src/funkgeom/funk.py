"""The Funk weak metric: distances, geodesic checks, spheres, and property probes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .body import (
    BOUNDARY_TOL,
    ConvexBody,
    GeometryError,
    HPolytope,
    Intersection,
    OutsideBodyError,
    _check_dim,
    diameter_estimate,
    is_bounded,
    ray_boundary,
    support_hyperplane,
)
from .finsler import Polyline
from .sampling import unit_directions


@dataclass(frozen=True)
class FunkDistance:
    value: float
    boundary_point: np.ndarray | None

    def __float__(self) -> float:
        return self.value


def _interior(body: ConvexBody, p, what: str = "point") -> np.ndarray:
    p = _check_dim(body, p)
    if not body.contains(p):
        raise OutsideBodyError(f"{what} {p} is not interior")
    return p


def _log_ratio(s: float) -> float:
    # log((1 + s) / s) where s = t* - 1 is the exit parameter seen from y
    return math.log1p(1.0 / s) if s > 0 else math.inf


def funk_distance(body: ConvexBody, x, y) -> FunkDistance:
    """F(x, y) = log(|x - a+| / |y - a+|), a+ the exit point of the ray from x through y.

    With xi = y - x, |x - a+| = t*|xi| and |y - a+| = (t* - 1)|xi|.  The
    remaining parameter t* - 1 is read off the ray leaving y itself rather
    than by subtracting 1 from t*, which keeps full precision for y close
    to the boundary.  Zero when x = y or when the ray never leaves.
    """
    x = _interior(body, x)
    y = _interior(body, y)
    if np.array_equal(x, y):
        return FunkDistance(0.0, None)
    r = ray_boundary(body, y, y - x)
    if r.is_contained:
        return FunkDistance(0.0, None)
    return FunkDistance(_log_ratio(r.t), r.boundary_point(y, y - x))


def funk(body: ConvexBody, x, y) -> float:
    return funk_distance(body, x, y).value


def funk_many(body: ConvexBody, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Row-wise F(X_i, Y_i) without validation (points assumed interior)."""
    D = Y - X
    same = ~np.any(D, axis=1)
    D = np.where(same[:, None], 1.0, D)
    s = body.exit_params(Y, D)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(s > 0.0, np.log1p(1.0 / s), np.inf)
    return np.where(same, 0.0, vals)


def funk_upper_halfplane(x, y) -> float:
    """max(log(x2 / y2), 0) on the upper half-plane."""
    x2, y2 = float(x[1]), float(y[1])
    if not (x2 > 0 and y2 > 0):
        raise OutsideBodyError("second coordinates must be positive")
    return max(math.log(x2 / y2), 0.0)


def funk_halfspace_oracle(normal, offset: float, x, y) -> float:
    """Half-space distance via distances to the boundary hyperplane.

    Independent of the ray machinery: in coordinates where the boundary is
    horizontal this is the upper-half-plane formula.
    """
    nu = np.asarray(normal, float)
    n = float(np.linalg.norm(nu))
    hx = (offset - float(nu @ np.asarray(x, float))) / n
    hy = (offset - float(nu @ np.asarray(y, float))) / n
    return funk_upper_halfplane((0.0, hx), (0.0, hy))


def is_geodesic_chain(body: ConvexBody, points, tol: float = 1e-9) -> bool:
    """True iff the distances along consecutive points add up to the end-to-end distance."""
    P = [_interior(body, p) for p in points]
    if len(P) < 2:
        raise GeometryError("need at least two points")
    legs = math.fsum(funk(body, a, b) for a, b in zip(P, P[1:]))
    return abs(legs - funk(body, P[0], P[-1])) <= tol


def chain_defect(body: ConvexBody, points) -> float:
    P = [np.asarray(p, float) for p in points]
    return math.fsum(funk(body, a, b) for a, b in zip(P, P[1:])) - funk(body, P[0], P[-1])


# ---------------------------------------------------------------------------
# flat-facet geodesics


def facet_segment(body: HPolytope, index: int) -> tuple[np.ndarray, np.ndarray]:
    """Endpoints [p, q] of facet ``index`` of a bounded 2-D polygon."""
    if body.dim != 2:
        raise GeometryError("facet segments are computed for 2-D polygons only")
    f = body.facets[index]
    nu = f.normal
    p0 = nu * f.offset / float(nu @ nu)
    u = np.array([-nu[1], nu[0]]) / np.linalg.norm(nu)
    lo, hi = -math.inf, math.inf
    for j, g in enumerate(body.facets):
        if j == index:
            continue
        a = float(g.normal @ u)
        rhs = g.offset - float(g.normal @ p0)
        if abs(a) < 1e-15:
            if rhs < 0:
                raise GeometryError("facet is empty")
            continue
        if a > 0:
            hi = min(hi, rhs / a)
        else:
            lo = max(lo, rhs / a)
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi - lo <= 0:
        raise GeometryError("facet is unbounded or degenerate")
    return p0 + lo * u, p0 + hi * u


def _exits_through(body: HPolytope, index: int, a, b, margin: float) -> bool:
    """Whether the ray from a through b leaves through the open facet segment."""
    if np.array_equal(a, b):
        return False
    r = ray_boundary(body, a, b - a)
    if r.is_contained:
        return False
    hit = r.boundary_point(a, b - a)
    p, q = facet_segment(body, index)
    f = body.facets[index]
    on_line = abs(float(f.normal @ hit) - f.offset) <= BOUNDARY_TOL * max(1.0, abs(f.offset))
    s = float((hit - p) @ (q - p)) / float((q - p) @ (q - p))
    return on_line and margin < s < 1.0 - margin


def polygonal_geodesic_witness(body: HPolytope, x, z, facet: int,
                               max_halvings: int = 40, margin: float = 1e-6) -> Polyline:
    """A non-straight geodesic x -> y -> z bending toward a flat facet.

    y starts at the midpoint of [x, z] and moves perpendicular to [x, z]
    toward the facet; the step is half, a quarter, ... of the distance to
    the boundary in that direction, taking the first y for which both rays
    R(x, y) and R(y, z) leave through the facet's interior.
    """
    if not isinstance(body, HPolytope):
        raise GeometryError("polygonal witnesses need a polytope with a flat facet")
    if body.dim != 2:
        raise GeometryError("polygonal witnesses are built in the plane; slice first")
    x = _interior(body, x)
    z = _interior(body, z)
    if not _exits_through(body, facet, x, z, margin):
        raise GeometryError("the ray from x through z misses the chosen facet")
    d = z - x
    perp = np.array([d[1], -d[0]]) / np.linalg.norm(d)
    if float(perp @ body.facets[facet].normal) < 0:
        perp = -perp
    m = 0.5 * (x + z)
    reach = body.exit_param(m, perp)
    if math.isinf(reach):
        reach = float(np.linalg.norm(d))
    step = 0.5 * reach
    for _ in range(max_halvings):
        y = m + step * perp
        if (body.contains(y) and _exits_through(body, facet, x, y, margin)
                and _exits_through(body, facet, y, z, margin)):
            return Polyline(np.vstack([x, y, z]))
        step *= 0.5
    raise GeometryError("no off-segment point found with both rays through the facet")


# ---------------------------------------------------------------------------
# spheres


BACKWARD_MARGIN = 1e-12


@dataclass
class SphereSample:
    center: np.ndarray
    delta: float
    side: str
    points: np.ndarray
    truncated: bool
    skipped: int = 0

    def as_dict(self) -> dict:
        return {
            "center": [float(c) for c in self.center],
            "delta": float(self.delta),
            "side": self.side,
            "points": [[float(c) for c in p] for p in self.points],
            "truncated": bool(self.truncated),
        }


def _dirs(body: ConvexBody, num_dirs: int | None) -> np.ndarray:
    return unit_directions(body.dim, num_dirs)


def forward_sphere(body: ConvexBody, x, delta: float, num_dirs: int | None = None) -> SphereSample:
    """Points y with F(x, y) = delta: the boundary scaled about x by 1 - e^-delta.

    Directions whose ray never exits are skipped and flag the sample as truncated.
    """
    x = _interior(body, x, "centre")
    if delta < 0:
        raise GeometryError("radius must be nonnegative")
    U = _dirs(body, num_dirs)
    r = body.exit_params(np.broadcast_to(x, U.shape), U)
    keep = np.isfinite(r)
    factor = -math.expm1(-delta)
    pts = x + (factor * r[keep])[:, None] * U[keep]
    skipped = int((~keep).sum())
    return SphereSample(x, delta, "forward", pts, skipped > 0, skipped)


def backward_sphere(body: ConvexBody, x, delta: float, num_dirs: int | None = None) -> SphereSample:
    """Points y with F(y, x) = delta.

    Reflect the boundary through x and scale by e^delta - 1, keeping only
    candidates inside the body; any rejection marks the sample truncated.
    A candidate within relative 1e-12 of the boundary counts as outside.
    Directions u whose opposite ray -u never exits carry no such point.
    """
    x = _interior(body, x, "centre")
    if delta < 0:
        raise GeometryError("radius must be nonnegative")
    U = _dirs(body, num_dirs)
    X = np.broadcast_to(x, U.shape)
    r_back = body.exit_params(X, -U)
    r_fwd = body.exit_params(X, U)
    finite = np.isfinite(r_back)
    reach = math.expm1(delta) * np.where(finite, r_back, 0.0)
    inside = reach < r_fwd * (1.0 - BACKWARD_MARGIN)
    inside |= reach == 0.0
    keep = finite & inside
    truncated = bool(np.any(finite & ~inside))
    pts = x + reach[keep][:, None] * U[keep]
    return SphereSample(x, delta, "backward", pts, truncated, int((~finite).sum()))


def backward_sphere_is_compact(body: ConvexBody, x, delta: float, num_dirs: int | None = None) -> bool:
    """Sampled certificate: no reflected candidate falls outside the body."""
    if not is_bounded(body):
        raise GeometryError("compactness probe needs a bounded body")
    return not backward_sphere(body, x, delta, num_dirs).truncated


# ---------------------------------------------------------------------------
# property probes


def funk_intersection_check(b1: ConvexBody, b2: ConvexBody, x, y) -> tuple[float, float]:
    """(F on the intersection, max of the two individual distances)."""
    for b in (b1, b2):
        _interior(b, x)
        _interior(b, y)
    inter = Intersection((b1, b2), witness=x)
    return funk(inter, x, y), max(funk(b1, x, y), funk(b2, x, y))


@dataclass
class ConvergenceReport:
    forward: np.ndarray
    backward: np.ndarray
    euclidean: np.ndarray
    threshold: float
    below: tuple[bool, bool, bool] = field(default=(False, False, False))

    @property
    def consistent(self) -> bool:
        """All three sequences end below the threshold, or none does."""
        return len(set(self.below)) == 1

    @property
    def forward_max(self) -> float:
        return float(self.forward.max())

    @property
    def backward_max(self) -> float:
        return float(self.backward.max())


def convergence_probe(body: ConvexBody, x, sequence, threshold: float = 1e-6) -> ConvergenceReport:
    """F(x, x_n), F(x_n, x) and |x - x_n| along a sequence, with tail threshold flags."""
    if not is_bounded(body):
        raise GeometryError("convergence probe needs a bounded body")
    x = _interior(body, x)
    S = [_interior(body, p) for p in sequence]
    fwd = np.array([funk(body, x, p) for p in S])
    bwd = np.array([funk(body, p, x) for p in S])
    euc = np.array([float(np.linalg.norm(p - x)) for p in S])
    below = (bool(fwd[-1] < threshold), bool(bwd[-1] < threshold), bool(euc[-1] < threshold))
    return ConvergenceReport(fwd, bwd, euc, threshold, below)


def _dist_to_segment(p, a, b) -> float:
    d = b - a
    dd = float(d @ d)
    s = 0.0 if dd == 0 else min(1.0, max(0.0, float((p - a) @ d) / dd))
    return float(np.linalg.norm(p - (a + s * d)))


def strict_triangle_gap(body: ConvexBody, x, y, z) -> float:
    return funk(body, x, y) + funk(body, y, z) - funk(body, x, z)


def strict_triangle_check(body: ConvexBody, x, y, z, margin: float = 1e-12,
                          separation: float = 0.05) -> bool:
    """F(x,y) + F(y,z) - F(x,z) > margin, for y well off the segment [x, z]."""
    if not body.strictly_convex:
        raise GeometryError("strict triangle inequality needs a strictly convex body")
    if not is_bounded(body):
        raise GeometryError("strict triangle inequality needs a bounded body")
    x, y, z = (_interior(body, p) for p in (x, y, z))
    if _dist_to_segment(y, x, z) < separation * diameter_estimate(body):
        raise GeometryError("y is too close to the segment [x, z]")
    return strict_triangle_gap(body, x, y, z) > margin


def support_lower_bound(body: ConvexBody, x, y) -> tuple[float, float]:
    """(F on the body, F on a supporting half-space at the exit point a+)."""
    res = funk_distance(body, x, y)
    if res.boundary_point is None:
        return res.value, 0.0
    h = support_hyperplane(body, res.boundary_point)
    return res.value, funk_halfspace_oracle(h.normal, h.offset, x, y)


def ball_convexity_probe(body: ConvexBody, x, delta: float, rng: np.random.Generator,
                         pairs: int = 200, checks: int = 16) -> bool:
    """Segments between sampled points of the forward ball B(x, delta) stay in it."""
    x = _interior(body, x)
    U = unit_directions(body.dim, 4 * pairs if body.dim == 2 else None)
    r = body.exit_params(np.broadcast_to(x, U.shape), U)
    factor = -math.expm1(-delta)
    pts = []
    while len(pts) < 2 * pairs:
        i = int(rng.integers(len(U)))
        if math.isfinite(r[i]):
            pts.append(x + rng.uniform(0, 0.999) * factor * r[i] * U[i])
    s = np.linspace(0.0, 1.0, checks + 2)[1:-1]
    for a, b in zip(pts[::2], pts[1::2]):
        seg = a + s[:, None] * (b - a)
        if np.any(funk_many(body, np.broadcast_to(x, seg.shape), seg) >= delta):
            return False
    return True
