"""Open convex bodies in R^n and the ray/boundary primitives built on them.

Every body is an *open* convex set carrying an interior witness point.
Bodies are immutable; their arrays are flagged read-only.

The workhorse is ``exit_params(X, Xi)``: for each row pair (x, xi) it
returns ``sup{t >= 0 : x + t*xi in closure(body)}`` (``inf`` when the ray
never leaves).  For interior x this is the radial function; for x on the
boundary the closed forms give 0 on outward directions, which the gauge
module turns into an infinite gauge value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linprog

from .sampling import unit_directions

BOUNDARY_TOL = 1e-9


class GeometryError(ValueError):
    """Invalid geometric input."""


class DimensionError(GeometryError):
    pass


class OutsideBodyError(GeometryError):
    """A point required to be interior is not."""


def as_point(p, dim: int | None = None) -> np.ndarray:
    arr = np.asarray(p, dtype=float).reshape(-1)
    if arr.size == 0:
        raise DimensionError("empty coordinate vector")
    if not np.all(np.isfinite(arr)):
        raise GeometryError(f"non-finite coordinates: {arr}")
    if dim is not None and arr.size != dim:
        raise DimensionError(f"expected dimension {dim}, got {arr.size}")
    return arr


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class RadialResult:
    """Outcome of a ray/boundary query.

    ``t`` is the exit parameter t* (x + t*·xi lies on the boundary), or
    ``inf`` when the whole ray {x + t·xi : t >= 0} is inside the body.
    """

    t: float

    @classmethod
    def hit(cls, t: float) -> "RadialResult":
        return cls(float(t))

    @classmethod
    def contained(cls) -> "RadialResult":
        return cls(math.inf)

    @property
    def is_contained(self) -> bool:
        return math.isinf(self.t)

    @property
    def is_hit(self) -> bool:
        return not self.is_contained

    def boundary_point(self, x, xi) -> np.ndarray | None:
        if self.is_contained:
            return None
        return np.asarray(x, float) + self.t * np.asarray(xi, float)


class ConvexBody:
    """Common surface of all body representations."""

    dim: int
    witness: np.ndarray

    def contains(self, p: np.ndarray) -> bool:
        raise NotImplementedError

    def exit_params(self, X: np.ndarray, Xi: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def gauges(self, X: np.ndarray, Xi: np.ndarray) -> np.ndarray:
        """Row-wise Minkowski gauge 1/t* at X (interior, unchecked); 0 for zero rows."""
        t = self.exit_params(X, Xi)
        with np.errstate(divide="ignore"):
            p = 1.0 / t
        return np.where(np.any(Xi, axis=1), p, 0.0)

    def _support(self, b: np.ndarray) -> "HalfSpace":
        raise NotImplementedError

    @property
    def strictly_convex(self) -> bool:
        raise NotImplementedError

    @property
    def bounding_radius(self) -> float:
        """Radius of a ball about the witness containing the body (inf if unknown)."""
        return math.inf

    def exit_param(self, x: np.ndarray, xi: np.ndarray) -> float:
        return float(self.exit_params(x[None, :], xi[None, :])[0])


def _unit_rows(Xi):
    """Rows of Xi scaled to unit length, and the scales (t* for Xi is t* for U over n)."""
    m = np.abs(Xi).max(axis=1)
    m = np.where(m > 0, m, 1.0)
    Y = Xi / m[:, None]
    n = np.linalg.norm(Y, axis=1)
    n = np.where(n > 0, n, 1.0)
    return Y / n[:, None], m * n


def _quadratic_exit(a, b, c):
    """Largest root of a t^2 + b t + c = 0 for c <= 0, a > 0, computed stably."""
    disc = np.sqrt(np.maximum(b * b - 4.0 * a * c, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        pos = np.where(b > 0, -2.0 * c / (b + disc), (disc - b) / (2.0 * a))
    return np.where(np.isnan(pos), 0.0, pos)


@dataclass(frozen=True, eq=False)
class HalfSpace(ConvexBody):
    """Open half-space {p : <normal, p> < offset}."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        nu = as_point(self.normal)
        if not np.linalg.norm(nu) > 0:
            raise GeometryError("half-space normal must be nonzero")
        object.__setattr__(self, "normal", _frozen(nu))
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def dim(self) -> int:
        return self.normal.size

    @property
    def witness(self) -> np.ndarray:
        nu = self.normal
        n2 = float(nu @ nu)
        return nu * (self.offset - math.sqrt(n2)) / n2

    def slack(self, p) -> float:
        return self.offset - float(self.normal @ p)

    def contains(self, p) -> bool:
        return self.slack(p) > 0

    def exit_params(self, X, Xi):
        d = Xi @ self.normal
        slack = self.offset - X @ self.normal
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(d > 0, np.maximum(slack, 0.0) / np.where(d > 0, d, 1.0), np.inf)

    def gauges(self, X, Xi):
        return np.maximum((Xi @ self.normal) / (self.offset - X @ self.normal), 0.0)

    def _support(self, b):
        return self

    @property
    def strictly_convex(self) -> bool:
        return self.dim == 1


@dataclass(frozen=True, eq=False)
class Ball(ConvexBody):
    """Open Euclidean ball."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise GeometryError("radius must be positive")
        object.__setattr__(self, "center", _frozen(as_point(self.center)))
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def witness(self) -> np.ndarray:
        return self.center

    def contains(self, p) -> bool:
        v = np.asarray(p, float) - self.center
        return float(v @ v) < self.radius ** 2

    def exit_params(self, X, Xi):
        v = X - self.center
        U, n = _unit_rows(Xi)
        b = 2.0 * np.einsum("ij,ij->i", U, v)
        # |v|^2 - R^2 factored so points near the sphere keep relative accuracy
        nv = np.linalg.norm(v, axis=1)
        c = (nv - self.radius) * (nv + self.radius)
        with np.errstate(over="ignore"):
            return _quadratic_exit(1.0, b, np.minimum(c, 0.0)) / n

    def gauges(self, X, Xi):
        # reciprocal of the largest root, in the cancellation-free branch
        v = X - self.center
        U, n = _unit_rows(Xi)
        nv = np.linalg.norm(v, axis=1)
        m = (self.radius - nv) * (self.radius + nv)
        dot = np.einsum("ij,ij->i", U, v)
        root = np.sqrt(dot * dot + m)
        with np.errstate(divide="ignore", invalid="ignore"):
            p = np.where(dot >= 0, (root + dot) / m, 1.0 / (root - dot))
        return np.where(np.any(Xi, axis=1), p * n, 0.0)

    def _support(self, b):
        v = b - self.center
        nu = v / np.linalg.norm(v)
        return HalfSpace(nu, float(nu @ self.center) + self.radius)

    @property
    def strictly_convex(self) -> bool:
        return True

    @property
    def bounding_radius(self) -> float:
        return self.radius


@dataclass(frozen=True, eq=False)
class Ellipsoid(ConvexBody):
    """Open ellipsoid {p : (p-c)^T Q (p-c) < 1} with Q symmetric positive definite."""

    center: np.ndarray
    shape: np.ndarray

    def __post_init__(self):
        c = as_point(self.center)
        Q = np.atleast_2d(np.asarray(self.shape, dtype=float))
        if Q.shape != (c.size, c.size):
            raise DimensionError(f"shape matrix must be {c.size}x{c.size}")
        if not np.allclose(Q, Q.T, rtol=0, atol=1e-12 * max(1.0, np.abs(Q).max())):
            raise GeometryError("shape matrix must be symmetric")
        Q = 0.5 * (Q + Q.T)
        if np.linalg.eigvalsh(Q).min() <= 0:
            raise GeometryError("shape matrix must be positive definite")
        object.__setattr__(self, "center", _frozen(c))
        object.__setattr__(self, "shape", _frozen(Q))

    @classmethod
    def from_axes(cls, center, semi_axes, rotation=None) -> "Ellipsoid":
        """Ellipsoid with the given semi-axis lengths, optionally rotated (columns = axes)."""
        axes = np.asarray(semi_axes, float)
        R = np.eye(axes.size) if rotation is None else np.asarray(rotation, float)
        Q = R @ np.diag(1.0 / axes ** 2) @ R.T
        return cls(center, Q)

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def witness(self) -> np.ndarray:
        return self.center

    def contains(self, p) -> bool:
        v = np.asarray(p, float) - self.center
        return float(v @ self.shape @ v) < 1.0

    def exit_params(self, X, Xi):
        v = X - self.center
        U, n = _unit_rows(Xi)
        QU = U @ self.shape
        a = np.einsum("ij,ij->i", QU, U)
        b = 2.0 * np.einsum("ij,ij->i", QU, v)
        nq = np.sqrt(np.einsum("ij,ij->i", v @ self.shape, v))
        c = (nq - 1.0) * (nq + 1.0)
        with np.errstate(over="ignore"):
            return _quadratic_exit(a, b, np.minimum(c, 0.0)) / n

    def gauges(self, X, Xi):
        v = X - self.center
        U, n = _unit_rows(Xi)
        QU = U @ self.shape
        a = np.einsum("ij,ij->i", QU, U)
        half_b = np.einsum("ij,ij->i", QU, v)
        nq = np.sqrt(np.einsum("ij,ij->i", v @ self.shape, v))
        m = (1.0 - nq) * (1.0 + nq)
        root = np.sqrt(half_b * half_b + a * m)
        with np.errstate(divide="ignore", invalid="ignore"):
            p = np.where(half_b >= 0, (root + half_b) / m, a / (root - half_b))
        return np.where(np.any(Xi, axis=1), p * n, 0.0)

    def _support(self, b):
        v = b - self.center
        v = v / math.sqrt(float(v @ self.shape @ v))
        nu = self.shape @ v
        nu = nu / np.linalg.norm(nu)
        return HalfSpace(nu, float(nu @ (self.center + v)))

    @property
    def strictly_convex(self) -> bool:
        return True

    @property
    def bounding_radius(self) -> float:
        return 1.0 / math.sqrt(float(np.linalg.eigvalsh(self.shape).min()))


@dataclass(frozen=True, eq=False)
class HPolytope(ConvexBody):
    """Finite intersection of open half-spaces (facets), possibly unbounded."""

    facets: tuple[HalfSpace, ...]
    witness: np.ndarray

    def __post_init__(self):
        facets = tuple(self.facets)
        if not facets:
            raise GeometryError("polytope needs at least one facet")
        dim = facets[0].dim
        if any(f.dim != dim for f in facets):
            raise DimensionError("facets of mixed dimension")
        object.__setattr__(self, "facets", facets)
        w = as_point(self.witness, dim)
        object.__setattr__(self, "witness", _frozen(w))
        object.__setattr__(self, "_N", _frozen(np.array([f.normal for f in facets])))
        object.__setattr__(self, "_s", _frozen(np.array([f.offset for f in facets])))
        if not self.contains(w):
            raise OutsideBodyError("witness must strictly satisfy every facet inequality")

    @classmethod
    def from_inequalities(cls, A, b, witness) -> "HPolytope":
        return cls(tuple(HalfSpace(a, s) for a, s in zip(np.asarray(A, float), b)), witness)

    @classmethod
    def box(cls, lo, hi) -> "HPolytope":
        """Axis-aligned open box; facet order is (+e0, -e0, +e1, -e1, ...)."""
        lo, hi = as_point(lo), as_point(hi, np.size(lo))
        facets = []
        for i in range(lo.size):
            e = np.zeros(lo.size)
            e[i] = 1.0
            facets += [HalfSpace(e, hi[i]), HalfSpace(-e, -lo[i])]
        return cls(tuple(facets), 0.5 * (lo + hi))

    @classmethod
    def from_vertices_2d(cls, vertices) -> "HPolytope":
        """Convex polygon from vertices listed counter-clockwise."""
        V = np.asarray(vertices, float)
        if V.ndim != 2 or V.shape[1] != 2 or len(V) < 3:
            raise GeometryError("need at least three 2-D vertices")
        facets = []
        for a, b in zip(V, np.roll(V, -1, axis=0)):
            edge = b - a
            nu = np.array([edge[1], -edge[0]])
            nu /= np.linalg.norm(nu)
            facets.append(HalfSpace(nu, float(nu @ a)))
        return cls(tuple(facets), V.mean(axis=0))

    @property
    def dim(self) -> int:
        return self.facets[0].dim

    def contains(self, p) -> bool:
        return bool(np.all(self._N @ np.asarray(p, float) < self._s))

    def exit_params(self, X, Xi):
        D = Xi @ self._N.T
        slack = np.maximum(self._s - X @ self._N.T, 0.0)
        with np.errstate(divide="ignore", over="ignore"):
            T = np.where(D > 0, slack / np.where(D > 0, D, 1.0), np.inf)
        return T.min(axis=1)

    def gauges(self, X, Xi):
        with np.errstate(divide="ignore", invalid="ignore"):
            G = (Xi @ self._N.T) / (self._s - X @ self._N.T)
        return np.maximum(G.max(axis=1), 0.0)

    def facet_gaps(self, b) -> np.ndarray:
        """Signed Euclidean distances of ``b`` to each facet hyperplane (negative inside)."""
        return (self._N @ b - self._s) / np.linalg.norm(self._N, axis=1)

    def _support(self, b):
        gaps = self.facet_gaps(b)
        scale = max(1.0, float(np.linalg.norm(b - self.witness)))
        active = np.flatnonzero(np.abs(gaps) <= BOUNDARY_TOL * scale)
        if active.size == 0:
            raise GeometryError("no facet is active at the given point")
        return self.facets[int(active[0])]

    @property
    def strictly_convex(self) -> bool:
        return self.dim == 1

    @cached_property
    def bounding_radius(self) -> float:
        # bounding box by 2n small LPs on the closure
        corners = []
        for i in range(self.dim):
            c = np.zeros(self.dim)
            c[i] = 1.0
            lo_hi = []
            for sign in (1.0, -1.0):
                res = linprog(sign * c, A_ub=self._N, b_ub=self._s,
                              bounds=[(None, None)] * self.dim, method="highs")
                if res.status != 0:
                    return math.inf
                lo_hi.append(res.x[i])
            corners.append(lo_hi)
        box = np.array(corners)
        far = np.maximum(np.abs(box[:, 0] - self.witness), np.abs(box[:, 1] - self.witness))
        return float(np.linalg.norm(far)) * (1 + 1e-9) + 1e-12


@dataclass(frozen=True, eq=False)
class ImplicitBody(ConvexBody):
    """Body given only by a membership predicate.

    ``bounding_radius`` bounds the body around the witness (``inf`` when
    unknown); it only seeds the bisection bracket.  Convexity and openness
    of the predicate's set are the caller's responsibility.
    """

    membership: Callable[[np.ndarray], bool]
    witness: np.ndarray
    bounding_radius: float = math.inf
    strict: bool = False
    max_doubling: int = 60

    def __post_init__(self):
        w = _frozen(as_point(self.witness))
        object.__setattr__(self, "witness", w)
        object.__setattr__(self, "bounding_radius", float(self.bounding_radius))
        if not self.membership(w):
            raise OutsideBodyError("membership(witness) must be true")

    @property
    def dim(self) -> int:
        return self.witness.size

    def contains(self, p) -> bool:
        return bool(self.membership(np.asarray(p, float)))

    def exit_params(self, X, Xi):
        return np.array([self._bisect(x, xi) for x, xi in zip(X, Xi)])

    def _bisect(self, x, xi) -> float:
        norm = float(np.linalg.norm(xi))
        if norm == 0:
            return math.inf
        inside = lambda t: self.membership(x + t * xi)
        lo = 0.0
        if math.isfinite(self.bounding_radius):
            hi = (float(np.linalg.norm(x - self.witness)) + self.bounding_radius) / norm
            hi = hi * (1 + 1e-9) + 1e-300
        else:
            hi = 1.0 / norm
        while inside(hi):
            lo = hi
            hi *= 2.0
            if hi * norm > 2.0 ** self.max_doubling:
                return math.inf
        while True:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                return hi
            if inside(mid):
                lo = mid
            else:
                hi = mid

    def _support(self, b):
        # subgradient of the gauge at the witness, by central differences
        w = self.witness
        xi0 = b - w
        t0 = self._bisect(w, xi0)
        xi0 = xi0 * t0
        h = 1e-5 * float(np.linalg.norm(xi0))
        g = np.empty(self.dim)
        for i in range(self.dim):
            e = np.zeros(self.dim)
            e[i] = h
            g[i] = (1.0 / self._bisect(w, xi0 + e) - 1.0 / self._bisect(w, xi0 - e)) / (2 * h)
        gn = float(np.linalg.norm(g))
        return HalfSpace(g / gn, 1.0 / gn + float(g @ w) / gn)

    @property
    def strictly_convex(self) -> bool:
        return self.strict


@dataclass(frozen=True, eq=False)
class Intersection(ConvexBody):
    """Intersection of finitely many bodies; needs a point interior to all members."""

    members: tuple[ConvexBody, ...]
    witness: np.ndarray | None = None

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise GeometryError("intersection needs at least one member")
        dim = members[0].dim
        if any(m.dim != dim for m in members):
            raise DimensionError("members of mixed dimension")
        object.__setattr__(self, "members", members)
        w = self.witness
        if w is None:
            cands = [m.witness for m in members]
            cands += [0.5 * (a.witness + b.witness) for i, a in enumerate(members)
                      for b in members[i + 1:]]
            w = next((c for c in cands if all(m.contains(c) for m in members)), None)
            if w is None:
                raise GeometryError("could not find a common interior point; pass witness=")
        w = as_point(w, dim)
        if not all(m.contains(w) for m in members):
            raise OutsideBodyError("witness must be interior to every member")
        object.__setattr__(self, "witness", _frozen(w))

    @property
    def dim(self) -> int:
        return self.members[0].dim

    def contains(self, p) -> bool:
        return all(m.contains(p) for m in self.members)

    def exit_params(self, X, Xi):
        return np.min([m.exit_params(X, Xi) for m in self.members], axis=0)

    def gauges(self, X, Xi):
        return np.max([m.gauges(X, Xi) for m in self.members], axis=0)

    def _support(self, b):
        for m in self.members:
            if _boundary_gap(m, b) <= BOUNDARY_TOL * _scale(m, b):
                return m._support(b)
        raise GeometryError("point is not on the boundary of any member")

    @property
    def strictly_convex(self) -> bool:
        return all(m.strictly_convex for m in self.members)

    @property
    def bounding_radius(self) -> float:
        return min(m.bounding_radius + float(np.linalg.norm(m.witness - self.witness))
                   for m in self.members)


# ---------------------------------------------------------------------------
# module-level operations


def _check_dim(body: ConvexBody, p) -> np.ndarray:
    return as_point(p, body.dim)


def contains(body: ConvexBody, p) -> bool:
    return bool(body.contains(_check_dim(body, p)))


def ray_boundary(body: ConvexBody, x, xi) -> RadialResult:
    """Where the ray x + t·xi (t >= 0) leaves the body."""
    x = _check_dim(body, x)
    xi = _check_dim(body, xi)
    if not np.any(xi):
        raise GeometryError("zero direction")
    if not body.contains(x):
        raise OutsideBodyError(f"base point {x} is not interior")
    return RadialResult(body.exit_param(x, xi))


def _scale(body: ConvexBody, b) -> float:
    return max(1.0, float(np.linalg.norm(b - body.witness)))


def _boundary_gap(body: ConvexBody, b) -> float:
    v = b - body.witness
    if not np.any(v):
        return math.inf
    t = body.exit_param(body.witness, v)
    return abs(t - 1.0) * float(np.linalg.norm(v))


def support_hyperplane(body: ConvexBody, b) -> HalfSpace:
    """A supporting half-space of ``body`` whose boundary passes through ``b``."""
    b = _check_dim(body, b)
    if _boundary_gap(body, b) > BOUNDARY_TOL * _scale(body, b):
        raise GeometryError(f"{b} is not a boundary point within tolerance")
    return body._support(b)


def is_strictly_convex(body: ConvexBody) -> bool:
    return bool(body.strictly_convex)


def recession_probe(body: ConvexBody, count: int | None = None) -> np.ndarray | None:
    """A direction along which the ray from the witness never exits, or None."""
    dirs = unit_directions(body.dim, count if count is not None else 360 * body.dim)
    extra = []
    for m in (body.members if isinstance(body, Intersection) else (body,)):
        if isinstance(m, HPolytope):
            N = m._N / np.linalg.norm(m._N, axis=1, keepdims=True)
            extra += list(-N)
            extra += [-(a + b) for i, a in enumerate(N) for b in N[i + 1:]]
        elif isinstance(m, HalfSpace):
            extra.append(-m.normal / np.linalg.norm(m.normal))
    if extra:
        E = np.array(extra)
        keep = np.linalg.norm(E, axis=1) > 1e-12
        E = E[keep] / np.linalg.norm(E[keep], axis=1, keepdims=True)
        dirs = np.vstack([dirs, E])
    t = body.exit_params(np.broadcast_to(body.witness, dirs.shape), dirs)
    hits = np.flatnonzero(np.isinf(t))
    return dirs[hits[0]] if hits.size else None


def is_bounded(body: ConvexBody, count: int | None = None) -> bool:
    """Boundedness; exact for balls/ellipsoids/half-spaces, a sampled certificate otherwise."""
    if isinstance(body, (Ball, Ellipsoid)):
        return True
    if isinstance(body, HalfSpace):
        return False
    if isinstance(body, ImplicitBody) and math.isfinite(body.bounding_radius):
        return True
    if isinstance(body, Intersection) and any(
            isinstance(m, (Ball, Ellipsoid)) for m in body.members):
        return True
    return recession_probe(body, count) is None


def affine_slice(body: ConvexBody, base, frame: Sequence) -> ImplicitBody:
    """The body intersected with base + span(frame), in frame coordinates."""
    base = _check_dim(body, base)
    F = np.atleast_2d(np.asarray(frame, float))
    if F.shape[1] != body.dim:
        raise DimensionError("frame vectors must live in the body's space")
    if np.linalg.matrix_rank(F) < F.shape[0]:
        raise GeometryError("frame vectors are linearly dependent")
    if not body.contains(base):
        raise OutsideBodyError("slice base must be interior")
    F = _frozen(F.T)
    radius = body.bounding_radius
    if math.isfinite(radius):
        sigma_min = float(np.linalg.svd(F, compute_uv=False).min())
        radius = (radius + float(np.linalg.norm(base - body.witness))) / sigma_min

    def membership(u):
        return body.contains(base + F @ u)

    return ImplicitBody(membership, np.zeros(F.shape[1]), radius, strict=body.strictly_convex)


def inradius_estimate(body: ConvexBody, count: int | None = None) -> float:
    """Smallest exit distance from the witness over a direction sample."""
    dirs = unit_directions(body.dim, count if count is not None else 90 * body.dim)
    t = body.exit_params(np.broadcast_to(body.witness, dirs.shape), dirs)
    finite = t[np.isfinite(t)]
    return float(finite.min()) if finite.size else 1.0


def diameter_estimate(body: ConvexBody, count: int | None = None) -> float:
    """Longest chord through the witness over a direction sample (a lower bound)."""
    dirs = unit_directions(body.dim, count)
    W = np.broadcast_to(body.witness, dirs.shape)
    return float(np.max(body.exit_params(W, dirs) + body.exit_params(W, -dirs)))


def midpoint_convexity_check(body: ConvexBody, points: np.ndarray) -> bool:
    """Spot-check: midpoints of consecutive interior sample pairs are interior."""
    inside = [p for p in points if body.contains(p)]
    return all(body.contains(0.5 * (p + q)) for p, q in zip(inside, inside[1:]))
