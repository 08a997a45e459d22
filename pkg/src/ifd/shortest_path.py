"""Shortest-path engine for monotone digraphs plus brute-force lattice oracles.

Dijkstra runs on a CSR adjacency via scipy; the path is reconstructed
backwards with ties broken toward the smallest vertex id.  Two independent
oracles back the approximation graphs: a dense snapped grid over the whole
parameter space and a per-cell staircase lattice, both dynamic programs
over right/up/diagonal moves with exact closed-form edge weights.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from .curves import PolygonalCurve
from .errors import BudgetExceeded
from .integrals import (
    diagonal_block_weights,
    horizontal_strip_weights,
    segment_quad_coeffs,
    vertical_strip_weights,
    _closed_form,
)
from .param_space import ParameterCell, build_cells

__all__ = [
    "PathResult",
    "dijkstra",
    "bellman_ford",
    "dense_grid_oracle",
    "staircase_cell_oracle",
    "snapped_axis",
]


@dataclass(frozen=True)
class PathResult:
    """Distance plus the realizing vertex sequence and its embedding."""

    distance: float
    vertex_ids: tuple
    points: np.ndarray
    kahan_length: float  # compensated re-sum of the path's edge weights

    @property
    def reachable(self) -> bool:
        return math.isfinite(self.distance)


def _kahan_sum(values) -> float:
    total = 0.0
    comp = 0.0
    for v in values:
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def dijkstra(graph, source: int | None = None, target: int | None = None) -> PathResult:
    """Exact shortest distance and path on a nonnegative-weight digraph.

    ``source``/``target`` default to the graph's own endpoints.  An
    unreachable target yields an infinite distance and an empty path.
    """
    s = graph.source if source is None else source
    t = graph.sink if target is None else target
    csr = graph.csr()
    dist = _csgraph_dijkstra(csr, directed=True, indices=s)
    d = float(dist[t])
    if not math.isfinite(d):
        return PathResult(math.inf, (), np.empty((0, 2)), 0.0)
    # backward walk over in-edges; smallest predecessor id wins ties
    csc = csr.tocsc()
    path = [t]
    weights_used = []
    cur = t
    guard = graph.n_vertices + 1
    while cur != s and guard > 0:
        guard -= 1
        lo, hi = csc.indptr[cur], csc.indptr[cur + 1]
        preds = csc.indices[lo:hi]
        wts = csc.data[lo:hi]
        slack = dist[preds] + wts - dist[cur]
        tol = 1e-12 * (1.0 + abs(dist[cur]))
        ok = np.flatnonzero(slack <= tol)
        if ok.size == 0:
            ok = np.array([int(np.argmin(slack))])
        pick = ok[np.argmin(preds[ok])]
        weights_used.append(float(wts[pick]))
        cur = int(preds[pick])
        path.append(cur)
    path.reverse()
    weights_used.reverse()
    pts = np.column_stack([graph.xs[path], graph.ys[path]])
    return PathResult(d, tuple(path), pts, _kahan_sum(weights_used))


def bellman_ford(graph, source: int | None = None) -> np.ndarray:
    """Plain relaxation loop; meant as a cross-check on small graphs."""
    s = graph.source if source is None else source
    n = graph.n_vertices
    dist = np.full(n, math.inf)
    dist[s] = 0.0
    tails = graph.tails
    heads = graph.heads
    wts = graph.weights
    for _ in range(n):
        cand = dist[tails] + wts
        better = cand < dist[heads]
        if not better.any():
            break
        np.minimum.at(dist, heads[better], cand[better])
    return dist


def snapped_axis(cuts: np.ndarray, spacing: float):
    """Subdivide each interval of ``cuts`` into equal steps no wider than ``spacing``.

    Every cut stays a lattice coordinate.  Returns the coordinate array and
    the index of each cut in it.
    """
    cuts = np.asarray(cuts, dtype=float)
    coords = []
    offsets = [0]
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        span = hi - lo
        m = max(1, int(math.ceil(span / spacing - 1e-12)))
        coords.append(lo + span * np.arange(m) / m)
        offsets.append(offsets[-1] + m)
    coords.append(np.array([cuts[-1]]))
    return np.concatenate(coords), np.asarray(offsets)


def _row_update(prev, w_up, w_diag, w_right):
    """One DP row: enter from below/diagonal, then sweep right."""
    base = prev + w_up
    base[1:] = np.minimum(base[1:], prev[:-1] + w_diag)
    r = np.concatenate(([0.0], np.cumsum(w_right)))
    return r + np.minimum.accumulate(base - r)


def _grid_axes(grid, h, max_points):
    xs, x_off = snapped_axis(grid.x_cuts, h)
    ys, y_off = snapped_axis(grid.y_cuts, h)
    n = len(xs) * len(ys)
    if n > max_points:
        raise BudgetExceeded(n, max_points)
    return xs, x_off, ys, y_off


def dense_grid_oracle(t1: PolygonalCurve, t2: PolygonalCurve, h: float,
                      max_points: int = 16_000_000) -> float:
    """Best monotone right/up/diagonal lattice path over the snapped grid.

    An upper bound on the integral distance that never increases when the
    lattice is refined by a vertex superset.  Streams the dynamic program
    row by row, so memory stays linear in the grid width.
    """
    grid = build_cells(t1, t2)
    xs, x_off, ys, y_off = _grid_axes(grid, h, max_points)
    nx = len(xs)
    ncols = grid.n_cols

    def col_slices():
        return [(i, x_off[i], x_off[i + 1]) for i in range(ncols)]

    cols = col_slices()
    # row 0: only rightward moves
    w_right = np.empty(nx - 1)
    for i, a, b in cols:
        cell = grid.cell(i, 0)
        w_right[a:b] = horizontal_strip_weights(cell, xs[a:b + 1] - cell.x0, np.array([0.0]))[0]
    prev = np.concatenate(([0.0], np.cumsum(w_right)))

    w_up = np.empty(nx)
    w_diag = np.empty(nx - 1)
    for j in range(grid.n_rows):
        lo_r, hi_r = y_off[j], y_off[j + 1]
        for r in range(lo_r, hi_r):
            y0, y1 = ys[r], ys[r + 1]
            for i, a, b in cols:
                cell = grid.cell(i, j)
                xi = xs[a:b + 1] - cell.x0
                eta = np.array([y0 - cell.y0, y1 - cell.y0])
                w_up[a:b + 1] = vertical_strip_weights(cell, eta, xi)[0]
                w_diag[a:b] = diagonal_block_weights(
                    cell, xi[:-1], eta[:1], float(xs[a + 1] - xs[a]) if b > a else 0.0, float(y1 - y0)
                )[0]
                w_right[a:b] = horizontal_strip_weights(cell, xi, eta[1:])[0]
            prev = _row_update(prev, w_up, w_diag, w_right)
    return float(prev[-1])


def dense_grid_oracle_path(t1, t2, h, max_points: int = 8_000_000):
    """Full-table variant returning (value, lattice path points)."""
    grid = build_cells(t1, t2)
    xs, x_off, ys, y_off = _grid_axes(grid, h, max_points)
    nx, ny = len(xs), len(ys)
    dist = np.empty((ny, nx))
    cols = [(i, x_off[i], x_off[i + 1]) for i in range(grid.n_cols)]
    w_right = np.empty(nx - 1)
    for i, a, b in cols:
        cell = grid.cell(i, 0)
        w_right[a:b] = horizontal_strip_weights(cell, xs[a:b + 1] - cell.x0, np.array([0.0]))[0]
    dist[0] = np.concatenate(([0.0], np.cumsum(w_right)))
    w_up = np.empty(nx)
    w_diag = np.empty(nx - 1)
    row = 0
    for j in range(grid.n_rows):
        for r in range(y_off[j], y_off[j + 1]):
            y0, y1 = ys[r], ys[r + 1]
            for i, a, b in cols:
                cell = grid.cell(i, j)
                xi = xs[a:b + 1] - cell.x0
                eta = np.array([y0 - cell.y0, y1 - cell.y0])
                w_up[a:b + 1] = vertical_strip_weights(cell, eta, xi)[0]
                w_diag[a:b] = diagonal_block_weights(
                    cell, xi[:-1], eta[:1], float(xs[a + 1] - xs[a]) if b > a else 0.0, float(y1 - y0)
                )[0]
                w_right[a:b] = horizontal_strip_weights(cell, xi, eta[1:])[0]
            row += 1
            dist[row] = _row_update(dist[row - 1], w_up, w_diag, w_right)
    value = float(dist[-1, -1])
    path = _backtrack_lattice(grid, xs, ys, dist)
    return value, path


def _elementary_weight(grid, x0, y0, x1, y1):
    cell = grid.cell_at((0.5 * (x0 + x1), 0.5 * (y0 + y1)), prefer_lower=True)
    A, B, C, l1len = segment_quad_coeffs(cell, (x0, y0), (x1, y1))
    return _closed_form(A, B, C, l1len)


def _backtrack_lattice(grid, xs, ys, dist):
    r, c = dist.shape[0] - 1, dist.shape[1] - 1
    pts = [(float(xs[c]), float(ys[r]))]
    while r > 0 or c > 0:
        best = None
        cands = []
        if c > 0:
            cands.append((r, c - 1))
        if r > 0:
            cands.append((r - 1, c))
        if r > 0 and c > 0:
            cands.append((r - 1, c - 1))
        for rr, cc in cands:
            w = _elementary_weight(grid, xs[cc], ys[rr], xs[c], ys[r])
            val = dist[rr, cc] + w
            if best is None or val < best[0] - 1e-15:
                best = (val, rr, cc)
        _, r, c = best
        pts.append((float(xs[c]), float(ys[r])))
    pts.reverse()
    return np.asarray(pts)


def _staircase_tables(cell: ParameterCell, a, b, k: int):
    xs = a[0] + (b[0] - a[0]) * np.arange(k + 1) / k
    ys = a[1] + (b[1] - a[1]) * np.arange(k + 1) / k
    xi = xs - cell.x0
    eta = ys - cell.y0
    wr = horizontal_strip_weights(cell, xi, eta)           # (k+1, k)
    wu = vertical_strip_weights(cell, eta, xi)             # (k, k+1)
    dxi = float(xs[1] - xs[0]) if k else 0.0
    deta = float(ys[1] - ys[0]) if k else 0.0
    wd = diagonal_block_weights(cell, xi[:-1], eta[:-1], dxi, deta)  # (k, k)
    return xs, ys, wr, wu, wd


def staircase_cell_oracle(cell: ParameterCell, a, b, k: int) -> float:
    """Best right/up/diagonal path over the k x k lattice spanned by a and b."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if a[0] == b[0] and a[1] == b[1]:
        return 0.0
    _, _, wr, wu, wd = _staircase_tables(cell, a, b, k)
    prev = np.concatenate(([0.0], np.cumsum(wr[0])))
    for r in range(k):
        prev = _row_update(prev, wu[r], wd[r], wr[r + 1])
    return float(prev[-1])


def _staircase_path(cell: ParameterCell, a, b, k: int):
    """(value, points) over the staircase lattice; small k only."""
    if a[0] == b[0] and a[1] == b[1]:
        return 0.0, np.asarray([[a[0], a[1]]], dtype=float)
    xs, ys, wr, wu, wd = _staircase_tables(cell, a, b, k)
    dist = np.empty((k + 1, k + 1))
    dist[0] = np.concatenate(([0.0], np.cumsum(wr[0])))
    for r in range(k):
        dist[r + 1] = _row_update(dist[r], wu[r], wd[r], wr[r + 1])
    r = c = k
    pts = [(float(xs[c]), float(ys[r]))]
    while r > 0 or c > 0:
        best = None
        if c > 0:
            best = (dist[r, c - 1] + wr[r, c - 1], r, c - 1)
        if r > 0:
            v = dist[r - 1, c] + wu[r - 1, c]
            if best is None or v < best[0] - 1e-15:
                best = (v, r - 1, c)
        if r > 0 and c > 0:
            v = dist[r - 1, c - 1] + wd[r - 1, c - 1]
            if v < best[0] - 1e-15:
                best = (v, r - 1, c - 1)
        _, r, c = best
        pts.append((float(xs[c]), float(ys[r])))
    pts.reverse()
    return float(dist[-1, -1]), np.asarray(pts)
