"""Standard test bodies."""

from __future__ import annotations

import math

import numpy as np

from .body import Ball, Ellipsoid, HalfSpace, HPolytope, Intersection


def unit_disk() -> Ball:
    return Ball([0.0, 0.0], 1.0)


def unit_square() -> HPolytope:
    return HPolytope.box([0.0, 0.0], [1.0, 1.0])


def unit_cube() -> HPolytope:
    return HPolytope.box([0.0, 0.0, 0.0], [1.0, 1.0, 1.0])


def upper_half_plane() -> HalfSpace:
    return HalfSpace([0.0, -1.0], 0.0)


def strip(width: float = 1.0) -> HPolytope:
    """{|x2| < width}."""
    return HPolytope.from_inequalities([[0.0, 1.0], [0.0, -1.0]], [width, width], [0.0, 0.0])


def random_polygon(k: int = 12, seed: int = 0) -> HPolytope:
    """Convex k-gon with vertices at sorted random angles on a jittered ellipse."""
    rng = np.random.default_rng(seed)
    while True:
        angles = np.sort(rng.uniform(0.0, 2 * math.pi, k))
        gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))
        if gaps.max() < math.pi * 0.9 and gaps.min() > 1e-3:
            break
    a, b = rng.uniform(0.8, 1.5, 2)
    V = np.column_stack([a * np.cos(angles), b * np.sin(angles)]) + rng.uniform(-0.5, 0.5, 2)
    return HPolytope.from_vertices_2d(V)


def random_ellipse(seed: int = 0) -> Ellipsoid:
    rng = np.random.default_rng(seed)
    axes = rng.uniform(0.5, 2.0, 2)
    th = rng.uniform(0, math.pi)
    R = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    return Ellipsoid.from_axes(rng.uniform(-1, 1, 2), axes, R)


def lens(separation: float = 1.0) -> Intersection:
    """Two unit disks whose centres are ``separation`` apart."""
    h = 0.5 * separation
    return Intersection((Ball([-h, 0.0], 1.0), Ball([h, 0.0], 1.0)), witness=[0.0, 0.0])


STANDARD = {
    "disk": unit_disk,
    "square": unit_square,
    "polygon12": lambda: random_polygon(12, 0),
    "ellipse": lambda: random_ellipse(0),
}
