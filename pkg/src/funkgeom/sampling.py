"""Deterministic direction sets and seeded interior sampling."""

from __future__ import annotations

import math

import numpy as np

_SNAP = 1e-12


def default_direction_count(dim: int) -> int:
    return 720 if dim <= 2 else 2048


def unit_directions(dim: int, count: int | None = None) -> np.ndarray:
    """Return ``count`` unit vectors in R^dim as rows.

    2-D uses uniform angles, 3-D a Fibonacci sphere, higher dimensions
    normalized Gaussians from a fixed seed.  Components below 1e-12 are
    snapped to zero so axis directions come out exact.
    """
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if count is None:
        count = default_direction_count(dim)
    if count < 1:
        raise ValueError("direction count must be positive")
    if dim == 2:
        angles = 2.0 * math.pi * np.arange(count) / count
        dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    elif dim == 3:
        k = np.arange(count) + 0.5
        z = 1.0 - 2.0 * k / count
        rho = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        phi = math.pi * (3.0 - math.sqrt(5.0)) * k
        dirs = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    else:
        dirs = np.random.default_rng(0).standard_normal((count, dim))
    dirs[np.abs(dirs) < _SNAP] = 0.0
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def random_unit_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    v = rng.standard_normal((count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def sample_interior(body, rng: np.random.Generator, count: int,
                    shrink: float = 0.98, cap: float | None = None) -> np.ndarray:
    """Random interior points of ``body``.

    Each point lies on a random ray from the body's witness at a fraction
    of the exit distance drawn uniformly from [0, shrink).  Rays that never
    leave the body are capped at ``cap`` (default: 10 x inradius estimate).
    Not uniform in volume; every point is strictly interior.
    """
    from .body import inradius_estimate

    w = body.witness
    dirs = random_unit_vectors(rng, count, body.dim)
    t = body.exit_params(np.broadcast_to(w, dirs.shape), dirs)
    if cap is None:
        cap = 10.0 * inradius_estimate(body)
    t = np.where(np.isinf(t), cap, t)
    frac = rng.uniform(0.0, shrink, size=count) ** (1.0 / body.dim)
    return w + (frac * t)[:, None] * dirs
