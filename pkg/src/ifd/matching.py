"""Parameter-space paths as matchings between the two curves.

A monotone path from the bottom-left to the top-right corner of parameter
space is a matching: parametrize it by L1 arc length and project onto the
axes to obtain the two reparametrizations.  The cost of the matching is
the path's weighted length, evaluated exactly piece by piece.
"""

from dataclasses import dataclass

import numpy as np

from .cell_paths import cell_shortest_path
from .curves import PolygonalCurve
from .errors import NotMonotone
from .integrals import (
    segment_weighted_length,
    split_at_parameter_lines,
    weighted_length,
)
from .param_space import build_cells

__all__ = [
    "MonotonePath",
    "matching_cost",
    "evaluate_matching",
    "locally_optimize",
    "max_leash",
]


@dataclass(frozen=True)
class MonotonePath:
    """xy-monotone polyline with cached cumulative L1 lengths."""

    vertices: np.ndarray
    cum_l1: np.ndarray

    @classmethod
    def from_points(cls, points, tol: float = 1e-9):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        if len(pts) == 0:
            raise NotMonotone("empty path")
        d = np.diff(pts, axis=0)
        if d.size:
            scale = 1.0 + float(np.abs(pts).max())
            if float(d.min()) < -tol * scale:
                raise NotMonotone(f"backward step of {float(d.min()):.3e}")
            d = np.maximum(d, 0.0)  # clamp float dust
        cum = np.concatenate(([0.0], np.cumsum(d.sum(axis=1)))) if d.size else np.zeros(1)
        return cls(vertices=pts, cum_l1=cum)

    @property
    def total_l1(self) -> float:
        return float(self.cum_l1[-1])

    @property
    def start(self):
        return tuple(self.vertices[0])

    @property
    def end(self):
        return tuple(self.vertices[-1])

    def legs(self):
        return zip(self.vertices[:-1], self.vertices[1:])


def _as_path(path) -> MonotonePath:
    return path if isinstance(path, MonotonePath) else MonotonePath.from_points(path)


def matching_cost(t1: PolygonalCurve, t2: PolygonalCurve, path) -> float:
    """Weighted length of the path: the integral cost of the induced matching."""
    p = _as_path(path)
    grid = build_cells(t1, t2)
    return sum(segment_weighted_length(grid, a, b) for a, b in p.legs())


def evaluate_matching(path, t: float):
    """Point of the path at L1 arc-length fraction ``t`` in [0, 1].

    The x and y projections of this map are the two monotone
    reparametrizations of the matching.
    """
    p = _as_path(path)
    if p.total_l1 == 0.0:
        return p.start
    s = min(max(t, 0.0), 1.0) * p.total_l1
    i = int(np.searchsorted(p.cum_l1, s, side="right")) - 1
    i = min(max(i, 0), len(p.vertices) - 2)
    span = p.cum_l1[i + 1] - p.cum_l1[i]
    frac = 0.0 if span == 0.0 else (s - p.cum_l1[i]) / span
    q = p.vertices[i] + frac * (p.vertices[i + 1] - p.vertices[i])
    return (float(q[0]), float(q[1]))


def _substitute_once(grid, p: MonotonePath):
    """One substitution sweep; returns (new path, its cost)."""
    pieces = []
    for a, b in p.legs():
        pieces.extend(split_at_parameter_lines(grid, a, b))
    if not pieces:
        return p, 0.0
    groups = []
    for seg in pieces:
        key = (seg.cell.i, seg.cell.j)
        if groups and groups[-1][0] == key:
            groups[-1][1].append(seg)
        else:
            groups.append((key, [seg]))
    out = [tuple(pieces[0].a)]
    cost = 0.0
    for key, segs in groups:
        cell = grid.cell(*key)
        first, last = segs[0].a, segs[-1].b
        if cell.kind == "antiparallel":
            sub = [tuple(s.a) for s in segs] + [tuple(last)]
            cost += sum(weighted_length(s) for s in segs)
        else:
            best = cell_shortest_path(cell, first, last)
            sub = [tuple(v) for v in best.vertices]
            cost += best.weighted_length
        out.extend(sub[1:])
    deduped = [out[0]]
    for q in out[1:]:
        if abs(q[0] - deduped[-1][0]) > 1e-15 or abs(q[1] - deduped[-1][1]) > 1e-15:
            deduped.append(q)
    return MonotonePath.from_points(deduped), cost


def locally_optimize(t1: PolygonalCurve, t2: PolygonalCurve, path) -> MonotonePath:
    """Replace every in-cell subpath by the cell's shortest path.

    The path is cut where it crosses the parameter grid; between
    consecutive crossings it lies in one cell and gets substituted by the
    in-cell optimum, which never increases the cost and dominates the
    original's similarity profile at every threshold.  Antiparallel cells
    keep their original subpath.

    A replaced subpath can run along a cell boundary, in which case the
    next sweep may cut the path differently and shave a little more, so
    the substitution repeats until the sweep reproduces its input exactly;
    returning that fixpoint makes the transform idempotent.
    """
    p = _as_path(path)
    grid = build_cells(t1, t2)
    for _ in range(32):
        new, _ = _substitute_once(grid, p)
        if len(new.vertices) == len(p.vertices) and np.array_equal(
            new.vertices, p.vertices
        ):
            return p
        p = new
    return p


def max_leash(t1: PolygonalCurve, t2: PolygonalCurve, path) -> float:
    """Largest weight along the path (the matching's bottleneck distance).

    The squared weight is convex on each straight in-cell piece, so the
    per-piece maximum sits at an endpoint.
    """
    p = _as_path(path)
    grid = build_cells(t1, t2)
    best = 0.0
    for a, b in p.legs():
        for seg in split_at_parameter_lines(grid, a, b):
            best = max(
                best,
                float(seg.cell.weight_at(seg.a.x, seg.a.y)),
                float(seg.cell.weight_at(seg.b.x, seg.b.y)),
            )
    if len(p.vertices) == 1:
        v = p.vertices[0]
        best = float(grid.cell_at((v[0], v[1])).weight_at(v[0], v[1]))
    return best
