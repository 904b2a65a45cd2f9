"""Radial and Minkowski functions of a convex body, and the Minkowski weak metric."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .body import (
    BOUNDARY_TOL,
    Ball,
    ConvexBody,
    Ellipsoid,
    GeometryError,
    HalfSpace,
    HPolytope,
    OutsideBodyError,
    _boundary_gap,
    _check_dim,
    is_bounded,
    ray_boundary,
)
from .sampling import unit_directions


def radial_function(body: ConvexBody, x, xi) -> float:
    """sup{t >= 0 : x + t·xi in body}; ``inf`` when the ray stays inside."""
    x = _check_dim(body, x)
    xi = _check_dim(body, xi)
    if not np.any(xi):
        return math.inf
    return ray_boundary(body, x, xi).t


def minkowski_gauge(body: ConvexBody, x, xi) -> float:
    """Minkowski function of ``body`` at the interior point ``x``, evaluated at ``xi``.

    Returns 1/t* for a boundary hit, 0 for a contained ray and for xi = 0.
    """
    x = _check_dim(body, x)
    xi = _check_dim(body, xi)
    if not body.contains(x):
        raise OutsideBodyError(f"base point {x} is not interior")
    if not np.any(xi):
        return 0.0
    return 1.0 / body.exit_param(x, xi)


def gauges(body: ConvexBody, X: np.ndarray, Xi: np.ndarray) -> np.ndarray:
    """Vectorized gauge for rows of base points and directions (no validation)."""
    return body.gauges(np.asarray(X, float), np.asarray(Xi, float))


def gauge_halfspace_closed(normal, offset: float, x, xi) -> float:
    """max(<nu, xi> / (s - <nu, x>), 0) for the half-space <nu, p> < s."""
    nu = np.asarray(normal, float)
    x = np.asarray(x, float)
    slack = offset - float(nu @ x)
    if not slack > 0:
        raise OutsideBodyError("x is outside the half-space")
    return max(float(nu @ np.asarray(xi, float)) / slack, 0.0)


def gauge_ball_closed(radius: float, x, xi) -> float:
    """Closed-form gauge of the origin-centred ball of the given radius at ``x``."""
    x = np.asarray(x, float)
    xi = np.asarray(xi, float)
    m = radius ** 2 - float(x @ x)
    if not m > 0:
        raise OutsideBodyError("x is outside the open ball")
    scale = float(np.abs(xi).max()) if xi.size else 0.0
    if scale == 0.0:
        return 0.0
    u = xi / scale  # homogeneity; avoids underflow in <xi, xi>
    dot = float(u @ x)
    return scale * (math.sqrt(dot * dot + m * float(u @ u)) + dot) / m


def _closure_gauge(body: ConvexBody, base: np.ndarray, xi: np.ndarray) -> float:
    if not np.any(xi):
        return 0.0
    t = body.exit_param(base, xi)
    return math.inf if t == 0 else 1.0 / t


def _check_origin_in_closure(body: ConvexBody) -> np.ndarray:
    origin = np.zeros(body.dim)
    if body.contains(origin):
        return origin
    from .body import ImplicitBody

    if isinstance(body, ImplicitBody):
        raise GeometryError("Minkowski weak metric on implicit bodies needs 0 interior")
    if _boundary_gap(body, origin) > BOUNDARY_TOL * max(1.0, float(np.linalg.norm(body.witness))):
        raise GeometryError("the origin must lie in the closure of the body")
    return origin


def minkowski_weak_metric(body: ConvexBody, x, y) -> float:
    """delta(x, y) = p(y - x) with p the gauge of ``body`` at the origin.

    The origin may sit on the boundary; then some directions have infinite
    gauge, which is returned as ``inf``.
    """
    x = _check_dim(body, x)
    y = _check_dim(body, y)
    origin = _check_origin_in_closure(body)
    return _closure_gauge(body, origin, y - x)


@dataclass
class WeakMetricClassification:
    finite: bool
    symmetric: bool
    strongly_separating: bool
    weakly_separating: bool
    certificates: dict[str, str] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "finite": self.finite,
            "symmetric": self.symmetric,
            "strongly_separating": self.strongly_separating,
            "weakly_separating": self.weakly_separating,
            "certificates": dict(self.certificates),
        }


def _fmt(v) -> str:
    return "(" + ", ".join(f"{c:.6g}" for c in np.asarray(v)) + ")"


def classify_minkowski(body: ConvexBody, count: int | None = None) -> WeakMetricClassification:
    """Classify the Minkowski weak metric of ``body`` (origin in its closure).

    finite <=> 0 interior; symmetric <=> body = -body; strongly separating
    <=> bounded; weakly separating <=> no line inside the body.  Balls,
    ellipsoids and half-spaces are decided structurally; everything else
    uses sampled directions, and the certificates say which.
    """
    origin = _check_origin_in_closure(body)
    cert: dict[str, str] = {}

    finite = body.contains(origin)
    cert["finite"] = "origin is interior" if finite else "origin lies on the boundary"

    if isinstance(body, (Ball, Ellipsoid)):
        symmetric = not np.any(body.center)
        cert["symmetric"] = f"structural: centre {_fmt(body.center)}"
    elif isinstance(body, HalfSpace):
        symmetric = False
        cert["symmetric"] = "structural: a half-space is never centrally symmetric"
    else:
        symmetric = True
        cert["symmetric"] = "sampled: gauge(xi) == gauge(-xi) on all sampled directions"
        for u in unit_directions(body.dim, count if count is not None else 360 * body.dim):
            a, b = _closure_gauge(body, origin, u), _closure_gauge(body, origin, -u)
            if not (a == b or math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12)):
                symmetric = False
                cert["symmetric"] = f"gauge differs along {_fmt(u)}: {a:.6g} vs {b:.6g}"
                break

    strongly = is_bounded(body, count)
    cert["strongly_separating"] = ("bounded" if strongly else "unbounded") + (
        "" if isinstance(body, (Ball, Ellipsoid, HalfSpace)) else " (sampled certificate)")

    if isinstance(body, (Ball, Ellipsoid)):
        weakly = True
        cert["weakly_separating"] = "structural: bounded body contains no line"
    elif isinstance(body, HalfSpace):
        weakly = body.dim == 1
        cert["weakly_separating"] = ("structural: a half-line contains no line" if weakly
                                     else "structural: lines parallel to the boundary")
    elif strongly:
        weakly = True
        cert["weakly_separating"] = "bounded body contains no line"
    elif isinstance(body, HPolytope):
        # lines in a polyhedron run along the null space of its facet normals
        _, sv, vt = np.linalg.svd(body._N)
        rank = int(np.sum(sv > 1e-12 * sv.max()))
        weakly = rank == body.dim
        cert["weakly_separating"] = ("facet normals span the space" if weakly else
                                     f"contains lines along {_fmt(vt[rank])}")
    else:
        weakly = True
        cert["weakly_separating"] = "sampled: no direction with both rays contained"
        w = body.witness
        for u in unit_directions(body.dim, count if count is not None else 360 * body.dim):
            if math.isinf(body.exit_param(w, u)) and math.isinf(body.exit_param(w, -u)):
                weakly = False
                cert["weakly_separating"] = f"contains the line through the witness along {_fmt(u)}"
                break
    return WeakMetricClassification(finite, symmetric, strongly, weakly, cert)
