"""JSON (de)serialization of bodies and paths.

Body files look like::

    {"dimension": 2,
     "body": {"type": "ball", "center": [0, 0], "radius": 1}}

Supported ``type`` values and their fields:

- ``ball``: ``center``, ``radius``
- ``halfspace``: ``normal``, ``offset`` (the open set <normal, p> < offset)
- ``ellipsoid``: ``center``, ``shape`` (SPD matrix Q, set (p-c)^T Q (p-c) < 1)
- ``hpolytope``: ``facets`` (list of ``{"normal", "offset"}``), ``witness``
- ``intersection``: ``members`` (list of body objects), optional ``witness``

Path files are a JSON list of vertices, or ``{"vertices": [...]}``.
"""

from __future__ import annotations

import json
from pathlib import Path as FsPath

import numpy as np

from .body import (
    Ball,
    ConvexBody,
    DimensionError,
    Ellipsoid,
    GeometryError,
    HalfSpace,
    HPolytope,
    Intersection,
)
from .finsler import Polyline


class BodySpecError(GeometryError):
    """Malformed body or path document."""


def body_from_dict(d: dict) -> ConvexBody:
    try:
        kind = d["type"]
        if kind == "ball":
            return Ball(d["center"], d["radius"])
        if kind == "halfspace":
            return HalfSpace(d["normal"], d["offset"])
        if kind == "ellipsoid":
            return Ellipsoid(d["center"], d["shape"])
        if kind == "hpolytope":
            facets = tuple(HalfSpace(f["normal"], f["offset"]) for f in d["facets"])
            return HPolytope(facets, d["witness"])
        if kind == "intersection":
            members = tuple(body_from_dict(m) for m in d["members"])
            return Intersection(members, d.get("witness"))
    except BodySpecError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise BodySpecError(f"malformed body: {exc}") from exc
    raise BodySpecError(f"unknown body type {d.get('type')!r}")


def body_to_dict(body: ConvexBody) -> dict:
    if isinstance(body, Ball):
        return {"type": "ball", "center": body.center.tolist(), "radius": body.radius}
    if isinstance(body, HalfSpace):
        return {"type": "halfspace", "normal": body.normal.tolist(), "offset": body.offset}
    if isinstance(body, Ellipsoid):
        return {"type": "ellipsoid", "center": body.center.tolist(), "shape": body.shape.tolist()}
    if isinstance(body, HPolytope):
        return {"type": "hpolytope",
                "facets": [{"normal": f.normal.tolist(), "offset": f.offset} for f in body.facets],
                "witness": body.witness.tolist()}
    if isinstance(body, Intersection):
        return {"type": "intersection", "members": [body_to_dict(m) for m in body.members],
                "witness": body.witness.tolist()}
    raise BodySpecError(f"{type(body).__name__} has no JSON form")


def load_body(path) -> ConvexBody:
    try:
        doc = json.loads(FsPath(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise BodySpecError(f"cannot read body file {path}: {exc}") from exc
    if not isinstance(doc, dict) or "body" not in doc:
        raise BodySpecError("body file needs a top-level 'body' object")
    body = body_from_dict(doc["body"])
    if "dimension" in doc and int(doc["dimension"]) != body.dim:
        raise DimensionError(f"declared dimension {doc['dimension']} but body has {body.dim}")
    if not body.contains(body.witness):
        raise BodySpecError("witness is not interior")
    return body


def dump_body(body: ConvexBody, path) -> None:
    doc = {"dimension": body.dim, "body": body_to_dict(body)}
    FsPath(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_path(path) -> Polyline:
    try:
        doc = json.loads(FsPath(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise BodySpecError(f"cannot read path file {path}: {exc}") from exc
    verts = doc["vertices"] if isinstance(doc, dict) else doc
    try:
        return Polyline(np.asarray(verts, float))
    except (ValueError, TypeError) as exc:
        raise BodySpecError(f"malformed path: {exc}") from exc
