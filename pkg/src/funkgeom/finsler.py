"""Tautological weak Finsler structure: Lagrangian, path lengths, intersections.

At a point x of an open convex body the unit "ball" of tangent vectors is
the body itself seen from x, so the Finsler norm of xi is the Minkowski
gauge of the body at x.  Lengths of concrete paths are computed by
Gauss-Legendre quadrature on polyline segments and by Simpson's rule on
sampled curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import simpson

from .body import (
    ConvexBody,
    DimensionError,
    GeometryError,
    OutsideBodyError,
    _check_dim,
    inradius_estimate,
    ray_boundary,
)
from .gauge import gauges, minkowski_gauge


class PathExitsBodyError(OutsideBodyError):
    pass


@dataclass(frozen=True, eq=False)
class TautologicalStructure:
    body: ConvexBody

    @property
    def dim(self) -> int:
        return self.body.dim

    def lagrangian(self, x, xi) -> float:
        return minkowski_gauge(self.body, x, xi)

    def lagrangians(self, X: np.ndarray, Xi: np.ndarray) -> np.ndarray:
        return gauges(self.body, X, Xi)

    def contains(self, p) -> bool:
        return self.body.contains(p)


@dataclass(frozen=True, eq=False)
class IntersectionStructure:
    """Fibrewise intersection of two structures; its Lagrangian is the pointwise max."""

    first: object
    second: object

    def __post_init__(self):
        if self.first.dim != self.second.dim:
            raise DimensionError("structures of different dimension")

    @property
    def dim(self) -> int:
        return self.first.dim

    def lagrangian(self, x, xi) -> float:
        return max(self.first.lagrangian(x, xi), self.second.lagrangian(x, xi))

    def lagrangians(self, X, Xi):
        return np.maximum(self.first.lagrangians(X, Xi), self.second.lagrangians(X, Xi))

    def contains(self, p) -> bool:
        return self.first.contains(p) and self.second.contains(p)


def lagrangian(S, x, xi) -> float:
    return S.lagrangian(x, xi)


def structure_intersection(S1, S2) -> IntersectionStructure:
    return IntersectionStructure(S1, S2)


# ---------------------------------------------------------------------------
# paths


@dataclass(frozen=True, eq=False)
class Polyline:
    vertices: np.ndarray

    def __post_init__(self):
        V = np.atleast_2d(np.asarray(self.vertices, float))
        if V.shape[0] < 2:
            raise GeometryError("a polyline needs at least two vertices")
        V.setflags(write=False)
        object.__setattr__(self, "vertices", V)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    def reversed(self) -> "Polyline":
        return Polyline(self.vertices[::-1])


@dataclass(frozen=True, eq=False)
class Sampled:
    """Curve known by samples (t, point, velocity) at strictly increasing t."""

    t: np.ndarray
    points: np.ndarray
    velocities: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, float).reshape(-1)
        P = np.atleast_2d(np.asarray(self.points, float))
        V = np.atleast_2d(np.asarray(self.velocities, float))
        if t.size < 2:
            raise GeometryError("a sampled path needs at least two samples")
        if P.shape != V.shape or P.shape[0] != t.size:
            raise DimensionError("samples, points and velocities disagree in shape")
        if np.any(np.diff(t) <= 0):
            raise GeometryError("sample times must be strictly increasing")
        for a in (t, P, V):
            a.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "points", P)
        object.__setattr__(self, "velocities", V)

    @classmethod
    def from_function(cls, gamma: Callable, dgamma: Callable, t0: float, t1: float,
                      n: int = 257) -> "Sampled":
        t = np.linspace(t0, t1, n)
        return cls(t, np.array([gamma(s) for s in t]), np.array([dgamma(s) for s in t]))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def start(self):
        return self.points[0]

    @property
    def end(self):
        return self.points[-1]

    def reversed(self) -> "Sampled":
        a, b = self.t[0], self.t[-1]
        return Sampled((a + b - self.t)[::-1], self.points[::-1], -self.velocities[::-1])


@dataclass(frozen=True, eq=False)
class Concatenation:
    parts: tuple

    @property
    def dim(self) -> int:
        return self.parts[0].dim

    @property
    def start(self):
        return self.parts[0].start

    @property
    def end(self):
        return self.parts[-1].end

    def reversed(self) -> "Concatenation":
        return Concatenation(tuple(p.reversed() for p in reversed(self.parts)))


Path = Union[Polyline, Sampled, Concatenation]


def concat(*paths: Path, atol: float = 1e-12) -> Concatenation:
    """gamma_1 * gamma_2 * ...; consecutive endpoints must coincide."""
    parts = []
    for p in paths:
        parts.extend(p.parts if isinstance(p, Concatenation) else [p])
    if not parts:
        raise GeometryError("nothing to concatenate")
    for a, b in zip(parts, parts[1:]):
        if not np.allclose(a.end, b.start, rtol=0, atol=atol):
            raise GeometryError("paths do not join end to start")
    return Concatenation(tuple(parts))


# ---------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Legendre settings for polyline segments.

    Each segment is split into ``subdivisions`` equal pieces integrated at
    ``order`` nodes.  A piece whose halves disagree with it by more than
    ``rtol`` (relative) is split again, up to ``max_depth`` times.
    """

    subdivisions: int = 64
    order: int = 8
    rtol: float = 1e-10
    max_depth: int = 48

    def __post_init__(self):
        if self.subdivisions < 1 or self.order < 1:
            raise ValueError("subdivisions and order must be positive")


@dataclass(frozen=True)
class LengthReport:
    value: float
    refined: float
    rel_change: float


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl(order: int):
    if order not in _GL_CACHE:
        x, w = leggauss(order)
        _GL_CACHE[order] = (0.5 * (x + 1.0), 0.5 * w)
    return _GL_CACHE[order]


def _gl_pieces(S, A, D, lo, hi, nodes, weights):
    """GL sums of t -> p(A_i + t D_i, D_i) over [lo_i, hi_i], one row per piece."""
    h = hi - lo
    T = lo[:, None] + h[:, None] * nodes[None, :]
    X = A[:, None, :] + T[:, :, None] * D[:, None, :]
    Xi = np.broadcast_to(D[:, None, :], X.shape)
    n = A.shape[1]
    vals = S.lagrangians(X.reshape(-1, n), Xi.reshape(-1, n)).reshape(T.shape)
    return h * (vals @ weights)


def chord_lengths(S, V, q: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """Lengths of the chords V[i] -> V[i+1], each parameterized on [0, 1]."""
    V = np.asarray(V, float)
    return chord_integrals(S, V[:-1], np.diff(V, axis=0), q)


def chord_integrals(S, A, D, q: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """Integrals of p(A_i + t D_i, D_i) over t in [0, 1], one per row.

    All chords are refined together: every piece is compared with the sum
    of its two halves and split again until they agree to ``q.rtol``.
    """
    A, D = np.asarray(A, float), np.asarray(D, float)
    m = len(A)
    nodes, weights = _gl(q.order)
    edges = np.linspace(0.0, 1.0, q.subdivisions + 1)
    moving = np.flatnonzero(np.any(D, axis=1))
    seg = np.repeat(moving, q.subdivisions)
    lo, hi = np.tile(edges[:-1], moving.size), np.tile(edges[1:], moving.size)
    done_seg, done_val = [], []
    if seg.size:
        coarse = _gl_pieces(S, A[seg], D[seg], lo, hi, nodes, weights)
        for _ in range(q.max_depth):
            mid = 0.5 * (lo + hi)
            both = _gl_pieces(S, np.concatenate([A[seg]] * 2), np.concatenate([D[seg]] * 2),
                              np.concatenate([lo, mid]), np.concatenate([mid, hi]), nodes, weights)
            left, right = both[: seg.size], both[seg.size:]
            fine = left + right
            if not np.all(np.isfinite(fine)):
                raise PathExitsBodyError("infinite Lagrangian along a segment")
            ok = np.abs(fine - coarse) <= q.rtol * np.abs(fine)
            done_seg.append(seg[ok])
            done_val.append(fine[ok])
            if ok.all():
                break
            bad = ~ok
            seg = np.concatenate([seg[bad], seg[bad]])
            lo, hi = np.concatenate([lo[bad], mid[bad]]), np.concatenate([mid[bad], hi[bad]])
            coarse = np.concatenate([left[bad], right[bad]])
        else:
            done_seg.append(seg)
            done_val.append(coarse)
    if not done_seg:
        return np.zeros(m)
    segs, vals = np.concatenate(done_seg), np.concatenate(done_val)
    order = np.argsort(segs, kind="stable")
    segs, vals = segs[order], vals[order]
    cuts = np.searchsorted(segs, np.arange(m + 1))
    return np.array([math.fsum(vals[cuts[i]:cuts[i + 1]]) for i in range(m)])


def segment_length(S, a, b, q: QuadratureSpec = QuadratureSpec()) -> float:
    """Length of the chord a -> b parameterized on [0, 1]."""
    return float(chord_lengths(S, np.vstack([np.asarray(a, float), np.asarray(b, float)]), q)[0])


def _require_inside(S, points) -> None:
    for p in points:
        if not S.contains(p):
            raise PathExitsBodyError(f"path leaves the domain at {p}")


def _part_lengths(S, gamma: Path, q: QuadratureSpec) -> list[float]:
    if isinstance(gamma, Concatenation):
        out = []
        for part in gamma.parts:
            out.extend(_part_lengths(S, part, q))
        return out
    if gamma.dim != S.dim:
        raise DimensionError("path and structure dimensions differ")
    if isinstance(gamma, Polyline):
        V = gamma.vertices
        _require_inside(S, V)
        return list(chord_lengths(S, V, q))
    _require_inside(S, gamma.points)
    vals = S.lagrangians(gamma.points, gamma.velocities)
    if not np.all(np.isfinite(vals)):
        raise PathExitsBodyError("infinite Lagrangian on a sample")
    return [float(simpson(vals, x=gamma.t))]


def path_length(S, gamma: Path, q: QuadratureSpec = QuadratureSpec()) -> float:
    """Finsler length: the integral of p(gamma(t), gamma'(t)) dt.

    Polylines contribute one integral per segment and concatenations the
    sum of their parts, so additivity under concatenation is exact up to
    summation rounding.  Any path point outside the domain is an error.
    """
    if isinstance(S, ConvexBody):
        S = TautologicalStructure(S)
    return math.fsum(_part_lengths(S, gamma, q))


def path_length_report(S, gamma: Path, q: QuadratureSpec = QuadratureSpec()) -> LengthReport:
    """Length together with a halving check (twice the subdivisions)."""
    value = path_length(S, gamma, q)
    q2 = QuadratureSpec(2 * q.subdivisions, q.order, q.rtol, q.max_depth)
    refined = path_length(S, gamma, q2)
    rel = abs(refined - value) / abs(refined) if refined else abs(value)
    return LengthReport(value, refined, rel)


def segment_length_closed(S, x, y) -> float:
    """Closed-form length of the chord x -> y: log(t*/(t*-1)), 0 if the ray stays inside.

    t* is the exit parameter of the ray from x along y - x.
    """
    body = S.body if isinstance(S, TautologicalStructure) else S
    x = _check_dim(body, x)
    y = _check_dim(body, y)
    if not body.contains(y):
        raise OutsideBodyError(f"{y} is not interior")
    if np.array_equal(x, y):
        if not body.contains(x):
            raise OutsideBodyError(f"{x} is not interior")
        return 0.0
    if not body.contains(x):
        raise OutsideBodyError(f"{x} is not interior")
    # remaining parameter t* - 1, measured from y
    s = body.exit_param(y, y - x)
    return 0.0 if math.isinf(s) else math.log1p(1.0 / s)


# ---------------------------------------------------------------------------
# minimality probe


@dataclass
class InfimumReport:
    minimum: float
    closed_form: float
    segment_quadrature: float
    trials: int
    best_path: Polyline | None = field(default=None, repr=False)


def random_polyline(body: ConvexBody, x, y, rng: np.random.Generator, scale: float,
                    max_tries: int = 200) -> Polyline:
    """x -> y through 1 to 4 jittered interior vertices placed along the chord."""
    k = int(rng.integers(1, 5))
    base = x + np.outer(np.arange(1, k + 1) / (k + 1), y - x)
    verts = []
    for p in base:
        s = scale
        for attempt in range(max_tries):
            q = p + s * rng.standard_normal(p.size)
            if body.contains(q):
                break
            if attempt % 20 == 19:
                s *= 0.5
        else:
            q = p
        verts.append(q)
    return Polyline(np.vstack([x, *verts, y]))


# the probe integrates ~100 polylines per pair; adaptive halving keeps the
# accuracy of the finer default grid at a fraction of the cost
PROBE_QUADRATURE = QuadratureSpec(subdivisions=16)


def infimum_estimate(S, x, y, trials: int = 100, seed: int = 0,
                     q: QuadratureSpec = PROBE_QUADRATURE) -> InfimumReport:
    """Smallest length among the chord and ``trials`` random interior polylines.

    Jitter is Gaussian with scale 0.1 x an inradius estimate; rejected
    vertices are redrawn (with the scale halved every 20 misses).
    """
    if isinstance(S, ConvexBody):
        S = TautologicalStructure(S)
    body = S.body
    x = _check_dim(body, x)
    y = _check_dim(body, y)
    closed = segment_length_closed(S, x, y)
    if np.array_equal(x, y):
        return InfimumReport(0.0, 0.0, 0.0, trials)
    chord = Polyline(np.vstack([x, y]))
    rng = np.random.default_rng(seed)
    scale = 0.1 * inradius_estimate(body)
    paths = [chord] + [random_polyline(body, x, y, rng, scale) for _ in range(trials)]
    # one batched quadrature over every chord of every candidate path
    for p in paths:
        _require_inside(S, p.vertices)
    A = np.vstack([p.vertices[:-1] for p in paths])
    D = np.vstack([np.diff(p.vertices, axis=0) for p in paths])
    pieces = chord_integrals(S, A, D, q)
    bounds = np.cumsum([0] + [len(p.vertices) - 1 for p in paths])
    lengths = [math.fsum(pieces[a:b]) for a, b in zip(bounds[:-1], bounds[1:])]
    best = int(np.argmin(lengths))
    return InfimumReport(lengths[best], closed, lengths[0], trials, paths[best])


def polyline(vertices: Sequence) -> Polyline:
    return Polyline(np.asarray(vertices, float))
