"""Plain SVG drawing of a planar body boundary and a sphere sample."""

from __future__ import annotations

import numpy as np

from .body import ConvexBody, GeometryError
from .sampling import unit_directions


def boundary_polyline(body: ConvexBody, count: int = 720, clip: float | None = None) -> np.ndarray:
    """Boundary points seen from the witness; rays that never exit are cut at ``clip``."""
    U = unit_directions(2, count)
    t = body.exit_params(np.broadcast_to(body.witness, U.shape), U)
    if clip is None:
        finite = t[np.isfinite(t)]
        clip = 2.0 * float(finite.max()) if finite.size else 1.0
    t = np.minimum(t, clip)
    return body.witness + t[:, None] * U


def _poly(points: np.ndarray, closed: bool, stroke: str, width: float) -> str:
    coords = " ".join(f"{x:.6f},{y:.6f}" for x, y in points)
    tag = "polygon" if closed else "polyline"
    return (f'<{tag} points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{width:.6f}"/>')


def render_svg(body: ConvexBody, sample, count: int = 720) -> str:
    """SVG with the sampled boundary of ``body`` and the sphere polyline.

    The viewBox is the bounding box of everything drawn, padded by 5%,
    with the y axis flipped so the picture has y pointing up.
    """
    if body.dim != 2:
        raise GeometryError("SVG output is only available in the plane")
    pts = np.asarray(sample.points, float).reshape(-1, 2)
    span = np.ptp(pts, axis=0).max() if len(pts) else 1.0
    clip = None
    U = unit_directions(2, count)
    if not np.all(np.isfinite(body.exit_params(np.broadcast_to(body.witness, U.shape), U))):
        clip = 3.0 * max(span, 1.0) + float(np.linalg.norm(np.asarray(sample.center) - body.witness))
    outline = boundary_polyline(body, count, clip)
    allp = np.vstack([outline, pts]) if len(pts) else outline
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    size = np.maximum(hi - lo, 1e-12)
    pad = 0.05 * size
    lo, size = lo - pad, size + 2 * pad

    def flip(P):
        return np.column_stack([P[:, 0], 2.0 * lo[1] + size[1] - P[:, 1]])

    width = 0.004 * float(size.max())
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{lo[0]:.6f} {lo[1]:.6f} '
        f'{size[0]:.6f} {size[1]:.6f}">',
        _poly(flip(outline), clip is None, "black", width),
    ]
    if len(pts):
        closed = sample.side == "forward" and not sample.truncated
        parts.append(_poly(flip(pts), closed, "crimson", width))
    c = flip(np.asarray(sample.center, float).reshape(1, 2))[0]
    parts.append(f'<circle cx="{c[0]:.6f}" cy="{c[1]:.6f}" r="{1.5 * width:.6f}" fill="crimson"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
