"""Seeded property suites run by ``funkgeom verify``.

Suites: ``axioms`` (weak-metric axioms and gauge properties), ``theorem``
(distance formula vs. path lengths, minimality, half-space comparisons,
slices, intersections, convergence), ``spheres`` and ``geodesics``.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .body import (
    Ball,
    ConvexBody,
    HalfSpace,
    HPolytope,
    Intersection,
    affine_slice,
    diameter_estimate,
    is_bounded,
)
from .finsler import Polyline, TautologicalStructure, infimum_estimate, path_length, random_polyline
from .funk import (
    _dist_to_segment,
    backward_sphere,
    ball_convexity_probe,
    chain_defect,
    facet_segment,
    forward_sphere,
    funk,
    funk_halfspace_oracle,
    funk_many,
    polygonal_geodesic_witness,
    support_lower_bound,
)
from .gauge import gauge_ball_closed, gauge_halfspace_closed, gauges
from .sampling import random_unit_vectors, sample_interior

METRIC_TOL = 1e-9
QUAD_RTOL = 1e-6
SUITES = ("axioms", "theorem", "spheres", "geodesics")


@dataclass
class PropertyResult:
    suite: str
    name: str
    passed: bool
    detail: str
    checked: int = 0


@dataclass
class RunReport:
    command: str
    body: str
    seed: int
    samples: int
    tolerances: dict
    results: list[PropertyResult] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def as_dict(self, timings: bool = False) -> dict:
        d = {
            "command": self.command,
            "body": self.body,
            "seed": self.seed,
            "samples": self.samples,
            "tolerances": self.tolerances,
            "results": [asdict(r) for r in self.results],
            "passed": self.passed,
        }
        if timings:
            d["wall_time"] = self.wall_time
        return d

    def table(self) -> str:
        width = max((len(r.suite) + len(r.name) for r in self.results), default=10) + 3
        lines = []
        for r in self.results:
            tag = f"{r.suite}/{r.name}"
            lines.append(f"{'PASS' if r.passed else 'FAIL'}  {tag:<{width}} {r.detail}")
        return "\n".join(lines)


def _pairs(body, rng, n):
    return sample_interior(body, rng, n), sample_interior(body, rng, n)


# --- axioms -----------------------------------------------------------------


def _axioms(body, rng, samples):
    out = []
    X, Y = _pairs(body, rng, samples)
    Z = sample_interior(body, rng, samples)
    diag = funk_many(body, X, X)
    out.append(("zero_diagonal", bool(np.all(diag == 0.0)), f"max {diag.max():.3g}", samples))

    fxy, fyz, fxz = funk_many(body, X, Y), funk_many(body, Y, Z), funk_many(body, X, Z)
    out.append(("nonnegative", bool(min(fxy.min(), fyz.min(), fxz.min()) >= 0),
                f"min {min(fxy.min(), fxz.min()):.3g}", 3 * samples))
    excess = fxz - (fxy + fyz)
    out.append(("triangle_inequality", bool(excess.max() <= METRIC_TOL),
                f"max excess {excess.max():.3g}", samples))

    fyx = funk_many(body, Y, X)
    asym = np.abs(fxy - fyx)
    i = int(np.argmax(asym))
    out.append(("asymmetry_witness", bool(asym[i] > METRIC_TOL),
                f"|F(x,y)-F(y,x)| = {asym[i]:.6g} at x={np.round(X[i], 4).tolist()}, "
                f"y={np.round(Y[i], 4).tolist()}", samples))

    # gauge at a point: homogeneity, subadditivity, sublevel sets
    Xi = rng.standard_normal((samples, body.dim))
    Eta = rng.standard_normal((samples, body.dim))
    lam = rng.uniform(0.1, 10.0, samples)
    p_xi, p_eta = gauges(body, X, Xi), gauges(body, X, Eta)
    p_lam = gauges(body, X, lam[:, None] * Xi)
    hom = np.abs(p_lam - lam * p_xi) / np.maximum(lam * p_xi, 1e-300)
    hom = np.where(p_xi == 0, p_lam, hom)
    out.append(("gauge_homogeneity", bool(hom.max() <= 1e-12), f"max rel {hom.max():.3g}", samples))
    sub = gauges(body, X, Xi + Eta) - (p_xi + p_eta)
    out.append(("gauge_subadditivity", bool(sub.max() <= 1e-9), f"max excess {sub.max():.3g}", samples))
    if is_bounded(body):
        step = Xi * rng.uniform(0.2, 3.0, samples)[:, None] / np.linalg.norm(Xi, axis=1)[:, None]
        step *= diameter_estimate(body)
        p = gauges(body, X, step)
        clear = np.abs(p - 1.0) > 1e-6
        inside = np.array([body.contains(x + s) for x, s in zip(X, step)])
        agree = (inside == (p < 1.0))[clear]
        out.append(("gauge_sublevel", bool(agree.all()), f"{int((~agree).sum())} mismatches",
                    int(clear.sum())))

    if body.strictly_convex and is_bounded(body):
        out.append(_strict_triangle(body, rng, min(samples, 1000)))
    return out


def _strict_triangle(body, rng, n):
    diam = diameter_estimate(body)
    gaps = []
    while len(gaps) < n:
        x, y, z = sample_interior(body, rng, 3)
        if _dist_to_segment(y, x, z) < 0.05 * diam:
            continue
        gaps.append(funk(body, x, y) + funk(body, y, z) - funk(body, x, z))
    g = min(gaps)
    return ("strict_triangle", bool(g > 1e-12), f"min gap {g:.3g}", n)


# --- theorem ----------------------------------------------------------------


def _theorem(body, rng, samples):
    out = []
    S = TautologicalStructure(body)
    n = max(10, samples // 10)
    X, Y = _pairs(body, rng, n)
    F = funk_many(body, X, Y)
    L = np.array([path_length(S, Polyline(np.vstack([x, y]))) for x, y in zip(X, Y)])
    rel = np.abs(F - L) / np.maximum(F, 1e-12)
    out.append(("distance_equals_segment_length", bool(rel.max() <= QUAD_RTOL),
                f"max rel {rel.max():.3g}", n))

    m = max(2, min(100, samples // 100))
    worst = -math.inf
    for i in range(m):
        rep = infimum_estimate(S, X[i], Y[i], trials=100, seed=int(rng.integers(2 ** 31)))
        worst = max(worst, rep.closed_form - rep.minimum)
    out.append(("segment_minimality", bool(worst <= METRIC_TOL),
                f"max undercut {worst:.3g} over {m}x100 paths", m))

    lows = [support_lower_bound(body, x, y) for x, y in zip(X, Y)]
    under = max(h - f for f, h in lows)
    out.append(("support_halfspace_bound", bool(under <= METRIC_TOL), f"max excess {under:.3g}", n))

    if isinstance(body, HalfSpace):
        Xh, Yh = _pairs(body, rng, samples)
        err = max(abs(funk(body, x, y) - funk_halfspace_oracle(body.normal, body.offset, x, y))
                  for x, y in zip(Xh, Yh))
        out.append(("halfspace_oracle", bool(err <= 1e-12), f"max abs {err:.3g}", samples))
        Xi = rng.standard_normal((samples, body.dim))
        g = gauges(body, Xh, Xi)
        ref = np.array([gauge_halfspace_closed(body.normal, body.offset, x, xi) for x, xi in zip(Xh, Xi)])
        err = float(np.max(np.abs(g - ref) / np.maximum(ref, 1e-300) * (ref > 0) + np.abs(g) * (ref == 0)))
        out.append(("halfspace_gauge_closed_form", bool(err <= 1e-9), f"max rel {err:.3g}", samples))
    if isinstance(body, Ball):
        Xi = rng.standard_normal((samples, body.dim))
        Xb = sample_interior(body, rng, samples)
        g = gauges(body, Xb, Xi)
        ref = np.array([gauge_ball_closed(body.radius, x - body.center, xi) for x, xi in zip(Xb, Xi)])
        err = float(np.max(np.abs(g - ref) / ref))
        out.append(("ball_gauge_closed_form", bool(err <= 1e-9), f"max rel {err:.3g}", samples))

    # monotonicity under inclusion: the body sits inside a supporting half-space
    u = random_unit_vectors(rng, 1, body.dim)[0]
    t = body.exit_param(body.witness, u)
    if math.isfinite(t):
        from .body import support_hyperplane

        H = support_hyperplane(body, body.witness + t * u)
        SH = TautologicalStructure(H)
        worst = -math.inf
        scale = 0.1 * diameter_estimate(body) if is_bounded(body) else 0.1
        k = max(10, samples // 100)
        for i in range(k):
            gamma = random_polyline(body, X[i % n], Y[i % n], rng, scale)
            worst = max(worst, path_length(SH, gamma) - path_length(S, gamma))
        out.append(("length_monotone_under_inclusion", bool(worst <= METRIC_TOL),
                    f"max excess {worst:.3g}", k))

        # intersection with a half-space through the witness side
        cut = HalfSpace(H.normal, float(H.normal @ body.witness) + 0.5 * H.slack(body.witness))
        inter = Intersection((body, cut), witness=body.witness)
        Xi_, Yi_ = _pairs(inter, rng, n)
        lhs = funk_many(inter, Xi_, Yi_)
        rhs = np.maximum(funk_many(body, Xi_, Yi_), funk_many(cut, Xi_, Yi_))
        err = float(np.abs(lhs - rhs).max())
        out.append(("intersection_is_max", bool(err <= METRIC_TOL), f"max abs {err:.3g}", n))

    if body.dim >= 2:
        out.append(_slices(body, rng, n))

    if is_bounded(body):
        out.append(_convergence(body, rng))
    return out


def _slices(body, rng, n):
    k = body.dim - 1
    worst = 0.0
    per = max(1, n // 10)
    for _ in range(10):
        base = sample_interior(body, rng, 1, shrink=0.5)[0]
        frame = np.linalg.qr(rng.standard_normal((body.dim, k)))[0].T
        sl = affine_slice(body, base, frame)
        U, V = sample_interior(sl, rng, per, shrink=0.9), sample_interior(sl, rng, per, shrink=0.9)
        for u, v in zip(U, V):
            worst = max(worst, abs(funk(sl, u, v) - funk(body, base + u @ frame, base + v @ frame)))
    return ("slice_consistency", bool(worst <= METRIC_TOL), f"max abs {worst:.3g}", 10 * per)


def _convergence(body, rng):
    x = body.witness
    u = random_unit_vectors(rng, 1, body.dim)[0]
    r, r_back = body.exit_param(x, u), body.exit_param(x, -u)
    err, over = 0.0, -math.inf
    bound = math.log1p(r / r_back)
    for k in range(1, 21):
        xn = x + (1.0 - 2.0 ** -k) * r * u
        err = max(err, abs(funk(body, x, xn) - k * math.log(2)))
        over = max(over, funk(body, xn, x) - bound)
    ok = err <= METRIC_TOL and over <= METRIC_TOL
    return ("divergence_to_boundary", ok, f"max |F(x,xn)-n log2| {err:.3g}; "
            f"F(xn,x) - bound {over:.3g}", 20)


# --- spheres ----------------------------------------------------------------


def _spheres(body, rng, samples):
    out = []
    centres = [body.witness, sample_interior(body, rng, 1, shrink=0.7)[0]]
    worst_f = worst_b = worst_ratio = 0.0
    for x in centres:
        prev = None
        for delta in (0.1, math.log(2), 2.0):
            fs = forward_sphere(body, x, delta)
            if len(fs.points):
                err = np.abs(funk_many(body, np.broadcast_to(x, fs.points.shape), fs.points) - delta)
                worst_f = max(worst_f, float(err.max()))
            if prev is not None and len(fs.points) == len(prev[1].points):
                ratio = -math.expm1(-delta) / -math.expm1(-prev[0])
                d = np.abs((fs.points - x) - ratio * (prev[1].points - x)).max()
                worst_ratio = max(worst_ratio, float(d))
            prev = (delta, fs)
            bs = backward_sphere(body, x, delta)
            if len(bs.points):
                err = np.abs(funk_many(body, bs.points, np.broadcast_to(x, bs.points.shape)) - delta)
                worst_b = max(worst_b, float(err.max()))
    out.append(("forward_sphere_radius", worst_f <= METRIC_TOL, f"max |F-delta| {worst_f:.3g}", 6))
    out.append(("forward_sphere_homothety", worst_ratio <= 1e-12, f"max deviation {worst_ratio:.3g}", 4))
    out.append(("backward_sphere_radius", worst_b <= METRIC_TOL, f"max |F-delta| {worst_b:.3g}", 6))
    if body.strictly_convex and is_bounded(body):
        ok = all(ball_convexity_probe(body, x, d, rng, pairs=50)
                 for x in centres for d in (0.1, math.log(2), 2.0))
        out.append(("forward_ball_convexity", ok, "segments stay inside sampled balls", 300))
    return out


# --- geodesics --------------------------------------------------------------


def _geodesics(body, rng, samples):
    out = []
    X, Z = _pairs(body, rng, samples)
    s = rng.uniform(0.0, 1.0, samples)[:, None]
    Y = X + s * (Z - X)
    defect = np.abs(funk_many(body, X, Y) + funk_many(body, Y, Z) - funk_many(body, X, Z))
    out.append(("collinear_additivity", bool(defect.max() <= METRIC_TOL),
                f"max defect {defect.max():.3g}", samples))
    if isinstance(body, HPolytope) and body.dim == 2 and is_bounded(body):
        out.append(_polygonal(body, rng, 100))
    if body.strictly_convex and is_bounded(body):
        out.append(_strict_triangle(body, rng, min(samples, 1000)))
    return out


def polygonal_configurations(body: HPolytope, rng, count: int):
    """Seeded (x, z, facet) triples where the ray x -> z leaves through the facet interior."""
    configs = []
    while len(configs) < count:
        facet = int(rng.integers(len(body.facets)))
        p, q = facet_segment(body, facet)
        a = p + rng.uniform(0.1, 0.9) * (q - p)
        x = sample_interior(body, rng, 1, shrink=0.9)[0]
        z = x + rng.uniform(0.2, 0.8) * (a - x)
        if body.exit_param(x, z - x) * np.linalg.norm(z - x) > 0 and body.contains(z):
            hit = x + body.exit_param(x, z - x) * (z - x)
            if np.linalg.norm(hit - a) < 1e-9 * max(1.0, np.linalg.norm(a)):
                configs.append((x, z, facet))
    return configs


def _polygonal(body, rng, count):
    worst = 0.0
    for x, z, facet in polygonal_configurations(body, rng, count):
        path = polygonal_geodesic_witness(body, x, z, facet)
        worst = max(worst, abs(chain_defect(body, path.vertices)))
    return ("polygonal_geodesic_witness", worst <= METRIC_TOL, f"max defect {worst:.3g}", count)


_RUNNERS: dict[str, Callable] = {
    "axioms": _axioms,
    "theorem": _theorem,
    "spheres": _spheres,
    "geodesics": _geodesics,
}


def run_suites(body: ConvexBody, suite: str = "all", seed: int = 0, samples: int = 10_000,
               name: str = "body", command: str = "verify") -> RunReport:
    names = SUITES if suite == "all" else (suite,)
    for s in names:
        if s not in _RUNNERS:
            raise ValueError(f"unknown suite {s!r}")
    report = RunReport(command, name, seed, samples,
                       {"metric_abs": METRIC_TOL, "quadrature_rel": QUAD_RTOL})
    t0 = time.perf_counter()
    for s in names:
        rng = np.random.default_rng([seed, SUITES.index(s)])
        for pname, ok, detail, checked in _RUNNERS[s](body, rng, samples):
            report.results.append(PropertyResult(s, pname, bool(ok), detail, int(checked)))
    report.wall_time = time.perf_counter() - t0
    return report
