"""Shortest weighted monotone paths inside one cell, and per-cell similarity profiles.

The in-cell optimum between dominated points a and b hugs the cell's
monotone axis: enter the axis where it first meets the rectangle spanned
by a and b, ride it as far as possible, leave for b.  When the axis misses
the rectangle, the optimum bends around the rectangle corner closest to
the axis.  The same path is simultaneously optimal for the partial
similarity at every threshold, which is what the profile type captures.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import AntiparallelCell, NotMonotone
from .integrals import WeightedSegment, segment_quad_coeffs, weighted_length
from .param_space import (
    CellGrid,
    GridEdge,
    ParameterCell,
    ParameterPoint,
    dominates,
    free_space_axes,
)

__all__ = [
    "CellPath",
    "SimilarityProfile",
    "cell_shortest_path",
    "two_cell_path",
    "partial_similarity_profile",
    "staircase_fallback_path",
]


@dataclass(frozen=True)
class CellPath:
    """Monotone polyline within one cell (or two, for edge crossings)."""

    vertices: tuple
    branch: str  # 'through_axis' | 'around_corner' | 'degenerate_fallback'
    weighted_length: float
    cells: tuple

    @property
    def l1_length(self) -> float:
        return sum(
            (q[0] - p[0]) + (q[1] - p[1])
            for p, q in zip(self.vertices[:-1], self.vertices[1:])
        )


def _dedupe(points, tol=1e-15):
    out = [points[0]]
    for p in points[1:]:
        if abs(p[0] - out[-1][0]) > tol or abs(p[1] - out[-1][1]) > tol:
            out.append(p)
    if len(out) == 1 and len(points) > 1:
        out.append(points[-1])
    return tuple(out)


def _piece_length(cell, p, q):
    kind = "axis_aligned" if (abs(q[0] - p[0]) <= 1e-15 or abs(q[1] - p[1]) <= 1e-15) else "general"
    return weighted_length(WeightedSegment(a=ParameterPoint(*p), b=ParameterPoint(*q), cell=cell, kind=kind))


def _polyline_length(cell, points):
    return sum(_piece_length(cell, p, q) for p, q in zip(points[:-1], points[1:]))


def cell_shortest_path(cell: ParameterCell, a, b) -> CellPath:
    """Shortest weighted monotone path from a to b inside one cell.

    Requires ``a <= b`` in the dominance order.  Raises
    :class:`AntiparallelCell` when the cell has no monotone axis; callers
    fall back to :func:`staircase_fallback_path`.
    """
    a = ParameterPoint(float(a[0]), float(a[1]))
    b = ParameterPoint(float(b[0]), float(b[1]))
    if not dominates(a, b, tol=1e-12):
        raise NotMonotone(f"{a} does not dominate {b}")
    if cell.kind == "antiparallel":
        raise AntiparallelCell(f"cell ({cell.i},{cell.j}) is antiparallel")
    k = cell.axis_intercept
    # axis line y = x + k against the rectangle spanned by a and b
    lo = max(a.x, a.y - k)
    hi = min(b.x, b.y - k)
    if lo <= hi:
        c1 = ParameterPoint(lo, lo + k)
        c2 = ParameterPoint(hi, hi + k)
        verts = _dedupe([a, c1, c2, b])
        branch = "through_axis"
    else:
        if k > b.y - a.x:
            corner = ParameterPoint(a.x, b.y)  # axis passes above-left
        else:
            corner = ParameterPoint(b.x, a.y)  # axis passes below-right
        verts = _dedupe([a, corner, b])
        branch = "around_corner"
    return CellPath(
        vertices=verts,
        branch=branch,
        weighted_length=_polyline_length(cell, verts),
        cells=(cell,),
    )


def staircase_fallback_path(cell: ParameterCell, a, b, k: int = 256) -> CellPath:
    """Best right/up/diagonal lattice path; used where no monotone axis exists."""
    from .shortest_path import _staircase_path  # local import to avoid a cycle

    value, points = _staircase_path(cell, a, b, k)
    return CellPath(
        vertices=_dedupe([ParameterPoint(*p) for p in points]),
        branch="degenerate_fallback",
        weighted_length=value,
        cells=(cell,),
    )


def _axes_endpoints(cell):
    axes = free_space_axes(cell)
    return axes, axes.ell


def two_cell_path(o, p, edge: GridEdge, grid: CellGrid) -> CellPath:
    """Shortest path between on-axis points of two cells sharing ``edge``.

    When both clipped axes end on the shared edge in dominance order the
    path rides one axis, runs along the edge, and rides the other.
    Otherwise the crossing point on the edge is found by ternary search
    (with a 64-point scan to bracket the minimum first) over the exact
    per-side in-cell optima, which makes the middle piece cross the edge
    perpendicularly.
    """
    o = ParameterPoint(float(o[0]), float(o[1]))
    p = ParameterPoint(float(p[0]), float(p[1]))
    if not dominates(o, p, tol=1e-12):
        raise NotMonotone(f"{o} does not dominate {p}")
    if edge.vertical:
        i_lo, _ = grid.locate(edge.fixed - 1e-12, 0.5 * (edge.lo + edge.hi), prefer_lower=True)
        cell_o = grid.cell(max(i_lo, 0), edge.span_index)
        cell_p = grid.cell(min(i_lo + 1, grid.n_cols - 1), edge.span_index)
    else:
        _, j_lo = grid.locate(0.5 * (edge.lo + edge.hi), edge.fixed - 1e-12, prefer_lower=True)
        cell_o = grid.cell(edge.span_index, max(j_lo, 0))
        cell_p = grid.cell(edge.span_index, min(j_lo + 1, grid.n_rows - 1))
    if cell_o.kind == "antiparallel" or cell_p.kind == "antiparallel":
        raise AntiparallelCell("two-cell crossing touches an antiparallel cell")

    axes_o, ell_o = _axes_endpoints(cell_o)
    axes_p, ell_p = _axes_endpoints(cell_p)
    on_edge = (
        lambda q: abs(q.x - edge.fixed) <= 1e-9 if edge.vertical else abs(q.y - edge.fixed) <= 1e-9
    )
    if ell_o is not None and ell_p is not None:
        c_o = ell_o[1]  # top-right endpoint of the first cell's clipped axis
        c_p = ell_p[0]  # bottom-left endpoint of the second cell's clipped axis
        if on_edge(c_o) and on_edge(c_p) and dominates(c_o, c_p, tol=1e-12):
            verts = _dedupe([o, c_o, c_p, p])
            # the piece along the shared edge evaluates identically in either cell
            length = (
                _polyline_length(cell_o, _dedupe([o, c_o]))
                + _piece_length(cell_o, c_o, c_p)
                + _polyline_length(cell_p, _dedupe([c_p, p]))
            )
            return CellPath(vertices=verts, branch="through_axis",
                            weighted_length=length, cells=(cell_o, cell_p))

    # crossing-point search along the shared edge
    if edge.vertical:
        w_lo, w_hi = o.y, p.y
        mk = lambda w: ParameterPoint(edge.fixed, w)
    else:
        w_lo, w_hi = o.x, p.x
        mk = lambda w: ParameterPoint(w, edge.fixed)
    w_lo = max(w_lo, edge.lo)
    w_hi = min(w_hi, edge.hi)
    if w_hi < w_lo:
        w_lo = w_hi = min(max(w_lo, edge.lo), edge.hi)

    def cost(w):
        z = mk(w)
        return (
            cell_shortest_path(cell_o, o, z).weighted_length
            + cell_shortest_path(cell_p, z, p).weighted_length
        )

    span = w_hi - w_lo
    if span <= 0.0:
        best = w_lo
    else:
        scan = np.linspace(w_lo, w_hi, 64)
        vals = [cost(w) for w in scan]
        idx = int(np.argmin(vals))
        lo = scan[max(idx - 1, 0)]
        hi = scan[min(idx + 1, len(scan) - 1)]
        while hi - lo > 1e-12 * span:
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            if cost(m1) <= cost(m2):
                hi = m2
            else:
                lo = m1
        best = 0.5 * (lo + hi)
    z = mk(best)
    left = cell_shortest_path(cell_o, o, z)
    right = cell_shortest_path(cell_p, z, p)
    verts = _dedupe(list(left.vertices) + list(right.vertices)[1:])
    return CellPath(
        vertices=verts,
        branch="around_corner",
        weighted_length=left.weighted_length + right.weighted_length,
        cells=(cell_o, cell_p),
    )


@dataclass(frozen=True)
class SimilarityProfile:
    """delta -> L1 length of the sub-path where the weight stays below delta.

    Exact per straight piece: the squared weight is quadratic in the piece
    parameter, so the sublevel set is an interval with algebraic endpoints.
    ``breakpoints`` are the deltas where the piecewise formula changes.
    """

    pieces: tuple  # (A, B, C, l1len) per straight piece
    breakpoints: np.ndarray
    total_l1: float

    def value_at(self, delta):
        deltas = np.atleast_1d(np.asarray(delta, dtype=float))
        out = np.zeros_like(deltas)
        for A, B, C, l1len in self.pieces:
            if l1len == 0.0:
                continue
            d2 = deltas * deltas
            if A <= 1e-14 * max(1.0, C):
                out += np.where(C <= d2 + 1e-15, l1len, 0.0)
                continue
            disc = B * B - 4.0 * A * (C - d2)
            r = np.sqrt(np.maximum(disc, 0.0))
            s_lo = np.clip((-B - r) / (2.0 * A), 0.0, 1.0)
            s_hi = np.clip((-B + r) / (2.0 * A), 0.0, 1.0)
            out += np.where(disc >= 0.0, (s_hi - s_lo) * l1len, 0.0)
        return out if np.ndim(delta) else float(out[0])


def partial_similarity_profile(cell: ParameterCell, path) -> SimilarityProfile:
    """Exact partial-similarity profile of a path that stays within one cell."""
    vertices = getattr(path, "vertices", path)
    pieces = []
    bps = set()
    total = 0.0
    for p, q in zip(vertices[:-1], vertices[1:]):
        A, B, C, l1len = segment_quad_coeffs(cell, p, q)
        pieces.append((A, B, C, l1len))
        total += l1len
        bps.add(math.sqrt(max(C, 0.0)))
        bps.add(math.sqrt(max(A + B + C, 0.0)))
        if A > 1e-14 * max(1.0, C) and 0.0 < -B / (2.0 * A) < 1.0:
            bps.add(math.sqrt(max(C - B * B / (4.0 * A), 0.0)))
    return SimilarityProfile(
        pieces=tuple(pieces),
        breakpoints=np.array(sorted(bps)),
        total_l1=total,
    )
