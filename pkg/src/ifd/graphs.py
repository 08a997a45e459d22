"""The two approximation graphs over parameter space.

Graph ``g1`` is a uniform monotone grid whose mesh shrinks with epsilon and
the smallest segment length; it wins whenever the optimal path spends
weight above that scale.  Graph ``g2`` is the arrangement of all monotone
free-space axes, axis-aligned lattices ("grid balls") around the
weight minimizers of the cell-boundary edges, and two diagonal connectors
at the corners; it covers the regime where the optimal path hugs the axes.
Shortest paths on both are exact upper bounds on the integral distance,
and their minimum is the reported approximation.
"""

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix

from .curves import PolygonalCurve, stats
from .errors import (
    BudgetExceeded,
    DegenerateBall,
    Disconnected,
    NoFeasibleGraph,
)
from .integrals import (
    horizontal_strip_weights,
    segment_weighted_length,
    vertical_strip_weights,
)
from .matching import MonotonePath
from .param_space import ParameterPoint, build_cells, edge_min, free_space_axes
from .shortest_path import dense_grid_oracle_path, dijkstra, snapped_axis

__all__ = [
    "GraphConfig",
    "MonotoneDigraph",
    "ApproxResult",
    "build_g1",
    "build_grid_ball",
    "build_g2",
    "approximate_integral_frechet",
]

_DEGENERATE_W = 1e-12  # edge minimizers below this get a bare vertex, no ball


@dataclass(frozen=True)
class GraphConfig:
    """Knobs of the two graphs.

    Defaults are the worst-case constants, which are far too fine to run
    on anything but toy inputs; :meth:`desk` returns the practical preset
    used by the CLI.
    """

    epsilon: float
    c_g1: float = 40000.0     # grid mesh divisor: mesh = eps*mu/(c_g1*(len1+len2))
    c_radius: float = 62.0    # ball radius multiple of the edge-minimum weight
    c_mesh: float = 456.0     # ball mesh divisor: mesh = eps*w(u)/c_mesh
    max_vertices: int = 10_000_000
    mode: str = "both"        # g1 | g2 | both | oracle

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if min(self.c_g1, self.c_radius, self.c_mesh) <= 0:
            raise ValueError("graph constants must be positive")
        if self.max_vertices <= 0:
            raise ValueError("max_vertices must be positive")
        if self.mode not in ("g1", "g2", "both", "oracle"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @classmethod
    def desk(cls, epsilon: float, **kw) -> "GraphConfig":
        kw.setdefault("c_g1", 40.0)
        kw.setdefault("c_radius", 62.0)
        kw.setdefault("c_mesh", 8.0)
        kw.setdefault("max_vertices", 1_000_000)
        return cls(epsilon=epsilon, **kw)


@dataclass
class MonotoneDigraph:
    """Directed geometric graph embedded in parameter space.

    Every edge tail dominates no coordinate of its head (the graph is
    monotone) and carries the exact weighted length of its embedding.
    """

    xs: np.ndarray
    ys: np.ndarray
    tails: np.ndarray
    heads: np.ndarray
    weights: np.ndarray
    source: int
    sink: int
    label: str = ""
    # set by builders whose construction proves monotonicity structurally
    prevalidated: bool = field(default=False, repr=False, compare=False)
    _csr: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.prevalidated:
            self.validate_monotone()

    @property
    def n_vertices(self) -> int:
        return len(self.xs)

    @property
    def n_edges(self) -> int:
        return len(self.tails)

    def point(self, i: int) -> ParameterPoint:
        return ParameterPoint(float(self.xs[i]), float(self.ys[i]))

    def validate_monotone(self, tol: float = 1e-9):
        if self.n_edges == 0:
            return
        dx = self.xs[self.heads] - self.xs[self.tails]
        dy = self.ys[self.heads] - self.ys[self.tails]
        if float(min(dx.min(), dy.min())) < -tol:
            raise ValueError("graph contains a non-monotone edge")
        if float(self.weights.min()) < -1e-12:
            raise ValueError("graph contains a negative edge weight")

    def csr(self):
        if self._csr is None:
            n = self.n_vertices
            tails, heads, weights = self.tails, self.heads, self.weights
            # sparse construction sums duplicate entries; parallel edges
            # must collapse to their minimum instead
            order = np.lexsort((heads, tails))
            t, h, w = tails[order], heads[order], weights[order]
            if len(t):
                new_group = np.empty(len(t), dtype=bool)
                new_group[0] = True
                new_group[1:] = (np.diff(t) != 0) | (np.diff(h) != 0)
                starts = np.flatnonzero(new_group)
                w = np.minimum.reduceat(w, starts)
                t, h = t[starts], h[starts]
            # scipy's csgraph drops unstored entries, so keep genuine
            # zero-weight edges alive with a denormal-sized stand-in
            data = np.where(w > 0.0, w, 5e-324)
            self._csr = csr_matrix((data, (t, h)), shape=(n, n))
        return self._csr


def _g1_mesh(t1, t2, cfg) -> float:
    st = stats(t1, t2)
    return cfg.epsilon * st.mu / (cfg.c_g1 * (st.len1 + st.len2))


def _axis_count(cuts, spacing) -> int:
    return 1 + sum(
        max(1, int(math.ceil((hi - lo) / spacing - 1e-12)))
        for lo, hi in zip(cuts[:-1], cuts[1:])
    )


def build_g1(t1: PolygonalCurve, t2: PolygonalCurve, cfg: GraphConfig) -> MonotoneDigraph:
    """Uniform monotone grid graph with exact closed-form edge weights.

    The grid is snapped so every parameter line is a grid line, which
    keeps each edge inside one cell and never widens the mesh.
    """
    sigma = _g1_mesh(t1, t2, cfg)
    grid = build_cells(t1, t2)
    nx = _axis_count(grid.x_cuts, sigma)
    ny = _axis_count(grid.y_cuts, sigma)
    if nx * ny > cfg.max_vertices:
        raise BudgetExceeded(nx * ny, cfg.max_vertices)
    xs, x_off = snapped_axis(grid.x_cuts, sigma)
    ys, y_off = snapped_axis(grid.y_cuts, sigma)
    assert len(xs) == nx and len(ys) == ny

    w_right = np.empty((ny, nx - 1))
    w_up = np.empty((ny - 1, nx))
    for i in range(grid.n_cols):
        a, b = x_off[i], x_off[i + 1]
        for j in range(grid.n_rows):
            c, d = y_off[j], y_off[j + 1]
            cell = grid.cell(i, j)
            xi = xs[a:b + 1] - cell.x0
            eta = ys[c:d + 1] - cell.y0
            w_right[c:d + 1, a:b] = horizontal_strip_weights(cell, xi, eta)
            w_up[c:d, a:b + 1] = vertical_strip_weights(cell, eta, xi)

    ids = np.arange(nx * ny, dtype=np.int64).reshape(ny, nx)
    right_tails = ids[:, :-1].ravel()
    up_tails = ids[:-1, :].ravel()
    tails = np.concatenate([right_tails, up_tails])
    heads = np.concatenate([right_tails + 1, up_tails + nx])
    weights = np.concatenate([w_right.ravel(), w_up.ravel()])
    # every edge steps +1 in x or +1 in y along sorted axes, so checking the
    # axes and the weight sign covers 100% of the edges
    assert np.all(np.diff(xs) > 0) and np.all(np.diff(ys) > 0)
    assert float(weights.min()) >= 0.0
    return MonotoneDigraph(
        xs=np.tile(xs, ny),
        ys=np.repeat(ys, nx),
        tails=tails,
        heads=heads,
        weights=weights,
        source=0,
        sink=nx * ny - 1,
        label="g1",
        prevalidated=True,
    )


def build_grid_ball(center, radius: float, mesh: float, bounds):
    """Axis-aligned lattice filling the L-infinity ball around ``center``.

    Returns ``('h'|'v', fixed, lo, hi)`` tuples clipped to the parameter
    rectangle ``bounds``; the boundary lines of the square are included.
    """
    if radius <= 0.0 or mesh <= 0.0:
        raise DegenerateBall(f"radius {radius!r} / mesh {mesh!r}")
    l1, l2 = bounds
    cx, cy = float(center[0]), float(center[1])
    k = max(1, int(math.ceil(2.0 * radius / mesh - 1e-9)))
    step = 2.0 * radius / k
    xlo, xhi = max(cx - radius, 0.0), min(cx + radius, l1)
    ylo, yhi = max(cy - radius, 0.0), min(cy + radius, l2)
    segs = []
    if xhi > xlo:
        for t in range(k + 1):
            y = cy - radius + t * step
            if -1e-12 <= y <= l2 + 1e-12:
                segs.append(("h", min(max(y, 0.0), l2), xlo, xhi))
    if yhi > ylo:
        for t in range(k + 1):
            x = cx - radius + t * step
            if -1e-12 <= x <= l1 + 1e-12:
                segs.append(("v", min(max(x, 0.0), l1), ylo, yhi))
    return segs


def _ball_line_estimate(center, radius, mesh, bounds):
    """(horizontal, vertical) lattice-line counts surviving the clip to bounds."""
    if radius <= 0 or mesh <= 0:
        return 0, 0
    k = max(1, int(math.ceil(2.0 * radius / mesh - 1e-9)))
    step = 2.0 * radius / k
    counts = []
    for coord, hi in ((center[1], bounds[1]), (center[0], bounds[0])):
        lo_t = (0.0 - (coord - radius)) / step
        hi_t = (hi - (coord - radius)) / step
        lo_i = max(0, int(math.ceil(lo_t - 1e-9)))
        hi_i = min(k, int(math.floor(hi_t + 1e-9)))
        counts.append(max(0, hi_i - lo_i + 1))
    return counts[0], counts[1]


def _merge_lines(raw, snap):
    """Union collinear intervals: raw (fixed, lo, hi) -> maximal segments."""
    groups = {}
    for fixed, lo, hi in raw:
        groups.setdefault(round(fixed / snap), []).append((fixed, lo, hi))
    merged = []
    for key in sorted(groups):
        items = sorted(groups[key], key=lambda t: t[1])
        fixed = items[0][0]
        cur_lo, cur_hi = items[0][1], items[0][2]
        for _, lo, hi in items[1:]:
            if lo <= cur_hi + snap:
                cur_hi = max(cur_hi, hi)
            else:
                merged.append((fixed, cur_lo, cur_hi))
                cur_lo, cur_hi = lo, hi
        merged.append((fixed, cur_lo, cur_hi))
    return merged


def _seg_intersections(p, q, a, b, tol):
    """Intersection parameters of two closed segments; handles collinear overlap."""
    rx, ry = q[0] - p[0], q[1] - p[1]
    sx, sy = b[0] - a[0], b[1] - a[1]
    rxs = rx * sy - ry * sx
    dx, dy = a[0] - p[0], a[1] - p[1]
    rlen = math.hypot(rx, ry)
    slen = math.hypot(sx, sy)
    out = []
    if abs(rxs) <= 1e-14 * max(rlen * slen, 1e-300):
        if abs(dx * ry - dy * rx) > tol * max(rlen, 1.0):
            return out
        rr = rx * rx + ry * ry
        ss = sx * sx + sy * sy
        for pt, t2 in ((a, 0.0), (b, 1.0)):
            if rr > 0:
                t1 = ((pt[0] - p[0]) * rx + (pt[1] - p[1]) * ry) / rr
                if -1e-9 <= t1 <= 1 + 1e-9:
                    out.append((min(max(t1, 0.0), 1.0), t2))
        for pt, t1 in ((p, 0.0), (q, 1.0)):
            if ss > 0:
                t2 = ((pt[0] - a[0]) * sx + (pt[1] - a[1]) * sy) / ss
                if -1e-9 <= t2 <= 1 + 1e-9:
                    out.append((t1, min(max(t2, 0.0), 1.0)))
        return out
    t1 = (dx * sy - dy * sx) / rxs
    t2 = (dx * ry - dy * rx) / rxs
    e1 = tol / max(rlen, tol)
    e2 = tol / max(slen, tol)
    if -e1 <= t1 <= 1 + e1 and -e2 <= t2 <= 1 + e2:
        out.append((min(max(t1, 0.0), 1.0), min(max(t2, 0.0), 1.0)))
    return out


class _Arrangement:
    """Snap-rounded arrangement of axis-aligned and monotone segments.

    Horizontal-vertical crossings (the bulk) are found by bucketing the
    vertical segments on x; the few general segments fall back to pairwise
    tests.  Distinct horizontals (resp. verticals) never intersect because
    collinear ones were merged beforehand.
    """

    def __init__(self, snap):
        self.snap = snap
        self.segs = []       # dicts: kind, p, q, splits(set of params)
        self.points = []     # isolated points that must also split segments

    def add_seg(self, p, q, kind):
        self.segs.append({
            "kind": kind,
            "p": (float(p[0]), float(p[1])),
            "q": (float(q[0]), float(q[1])),
            "splits": set(),
        })

    def add_point(self, p):
        self.points.append((float(p[0]), float(p[1])))

    def key(self, pt):
        return (round(pt[0] / self.snap), round(pt[1] / self.snap))

    def run(self, crossing_cap, scan_cap=None):
        snap = self.snap
        scan_cap = 4 * crossing_cap if scan_cap is None else scan_cap
        count = 0
        scanned = 0
        h_idx = [i for i, s in enumerate(self.segs) if s["kind"] == "h"]
        v_idx = [i for i, s in enumerate(self.segs) if s["kind"] == "v"]
        o_idx = [i for i, s in enumerate(self.segs) if s["kind"] == "o"]
        v_sorted = sorted(v_idx, key=lambda i: self.segs[i]["p"][0])
        v_xs = [self.segs[i]["p"][0] for i in v_sorted]
        for hi in h_idx:
            h = self.segs[hi]
            y = h["p"][1]
            x0, x1 = h["p"][0], h["q"][0]
            lo = bisect_left(v_xs, x0 - snap)
            hi_b = bisect_right(v_xs, x1 + snap)
            scanned += hi_b - lo
            if scanned > scan_cap:
                raise BudgetExceeded(scanned, crossing_cap)
            for t in range(lo, hi_b):
                v = self.segs[v_sorted[t]]
                if v["p"][1] - snap <= y <= v["q"][1] + snap:
                    x = v["p"][0]
                    if x1 > x0:
                        h["splits"].add(min(max((x - x0) / (x1 - x0), 0.0), 1.0))
                    if v["q"][1] > v["p"][1]:
                        v["splits"].add(
                            min(max((y - v["p"][1]) / (v["q"][1] - v["p"][1]), 0.0), 1.0)
                        )
                    count += 1
                    if count > crossing_cap:
                        raise BudgetExceeded(count, crossing_cap)
        for oi in o_idx:
            so = self.segs[oi]
            for j, sj in enumerate(self.segs):
                if j == oi:
                    continue
                hits = _seg_intersections(so["p"], so["q"], sj["p"], sj["q"], snap)
                for t1, t2 in hits:
                    so["splits"].add(t1)
                    sj["splits"].add(t2)
                count += len(hits)
                if count > crossing_cap:
                    raise BudgetExceeded(count, crossing_cap)
        for pt in self.points:
            for s in self.segs:
                for t1, _ in _seg_intersections(s["p"], s["q"], pt, pt, snap):
                    s["splits"].add(t1)

    def pieces(self):
        for s in self.segs:
            p, q = s["p"], s["q"]
            params = sorted(s["splits"] | {0.0, 1.0})
            prev = None
            for t in params:
                pt = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
                if prev is None:
                    prev = pt
                elif self.key(prev) != self.key(pt):
                    yield prev, pt
                    prev = pt


def build_g2(t1: PolygonalCurve, t2: PolygonalCurve, cfg: GraphConfig) -> MonotoneDigraph:
    """Arrangement graph: free-space axes, grid balls, and corner connectors.

    Cell axes are clipped to their cell (antiparallel cells contribute
    nothing); every cell-boundary edge, outer boundary included, gets a
    grid ball at its weight minimizer; the source/sink connectors exist
    exactly when the corner cells' axes meet their cell.  All pairwise
    intersections become vertices, every edge points right/up, and weights
    come from the closed forms (trapezoid on the axes, arsinh form on the
    lattice lines, the general form on connectors).
    """
    grid = build_cells(t1, t2)
    l1, l2 = grid.extent
    scale = max(l1, l2, 1.0)
    snap = 1e-12 * scale

    h_raw, v_raw, diag_segs, iso = [], [], [], []
    iso.append((0.0, 0.0))
    iso.append((l1, l2))

    for col in grid.cells:
        for cell in col:
            if cell.kind == "antiparallel":
                continue
            axes = free_space_axes(cell)
            if axes.ell is None:
                continue
            p, q = axes.ell
            if math.hypot(q.x - p.x, q.y - p.y) <= snap:
                iso.append((p.x, p.y))
            else:
                diag_segs.append((p, q))

    projected_lines = 0
    projected_internal = 0
    balls = []
    for edge in grid.edges():
        u, w = edge_min(grid, edge)
        if w < _DEGENERATE_W:
            iso.append((u.x, u.y))
            continue
        radius = cfg.c_radius * w
        mesh = cfg.epsilon * w / cfg.c_mesh
        nh, nv = _ball_line_estimate(u, radius, mesh, (l1, l2))
        projected_lines += nh + nv
        # a ball's own lattice crossings alone are that many vertices
        projected_internal += nh * nv
        balls.append((u, radius, mesh))
    # ball lattices dominate the crossing count; reject hopeless inputs
    # before materializing anything (the arrangement pass enforces the
    # exact budget)
    if projected_internal > 2 * cfg.max_vertices:
        raise BudgetExceeded(projected_internal, cfg.max_vertices)
    if (projected_lines // 2 + 1) ** 2 > 8 * cfg.max_vertices:
        raise BudgetExceeded((projected_lines // 2 + 1) ** 2, cfg.max_vertices)
    for u, radius, mesh in balls:
        try:
            for kind, fixed, lo, hi in build_grid_ball(u, radius, mesh, (l1, l2)):
                (h_raw if kind == "h" else v_raw).append((fixed, lo, hi))
        except DegenerateBall:
            iso.append((u.x, u.y))

    conn_segs = []
    s_cell = grid.cell(0, 0)
    if s_cell.kind != "antiparallel":
        ell = free_space_axes(s_cell).ell
        if ell is not None:
            c_s = ell[0]
            if math.hypot(c_s.x, c_s.y) > snap:
                conn_segs.append(((0.0, 0.0), c_s))
    t_cell = grid.cell(grid.n_cols - 1, grid.n_rows - 1)
    if t_cell.kind != "antiparallel":
        ell = free_space_axes(t_cell).ell
        if ell is not None:
            c_t = ell[1]
            if math.hypot(l1 - c_t.x, l2 - c_t.y) > snap:
                conn_segs.append((c_t, (l1, l2)))

    arr = _Arrangement(snap)
    for fixed, lo, hi in _merge_lines(h_raw, snap):
        arr.add_seg((lo, fixed), (hi, fixed), "h")
    for fixed, lo, hi in _merge_lines(v_raw, snap):
        arr.add_seg((fixed, lo), (fixed, hi), "v")
    for p, q in diag_segs:
        arr.add_seg(p, q, "o")
    for p, q in conn_segs:
        arr.add_seg(p, q, "o")
    for pt in iso:
        arr.add_point(pt)
    arr.run(crossing_cap=cfg.max_vertices, scan_cap=2 * cfg.max_vertices)

    vid = {}
    coords = []

    def vertex(pt):
        key = arr.key(pt)
        if key not in vid:
            vid[key] = len(coords)
            coords.append(pt)
        return vid[key]

    for pt in iso:
        vertex(pt)
    edges = {}
    for p, q in arr.pieces():
        if (q[0], q[1]) < (p[0], p[1]):
            p, q = q, p
        ia, ib = vertex(p), vertex(q)
        if ia == ib or (ia, ib) in edges:
            continue
        edges[(ia, ib)] = segment_weighted_length(grid, p, q)
        if len(vid) > cfg.max_vertices:
            raise BudgetExceeded(len(vid), cfg.max_vertices)

    pts = np.asarray(coords) if coords else np.empty((0, 2))
    tails = np.fromiter((k[0] for k in edges), dtype=np.int64, count=len(edges))
    heads = np.fromiter((k[1] for k in edges), dtype=np.int64, count=len(edges))
    weights = np.fromiter(edges.values(), dtype=float, count=len(edges))
    return MonotoneDigraph(
        xs=pts[:, 0].copy(),
        ys=pts[:, 1].copy(),
        tails=tails,
        heads=heads,
        weights=weights,
        source=vid[arr.key((0.0, 0.0))],
        sink=vid[arr.key((l1, l2))],
        label="g2",
    )


@dataclass(frozen=True)
class ApproxResult:
    """Outcome of the full approximation pipeline."""

    value: float
    average: float
    winning_mode: str
    path: MonotonePath
    graph_stats: dict


def _affordable_mesh(t1, t2, budget):
    grid = build_cells(t1, t2)
    l1, l2 = grid.extent
    h = math.sqrt(max(l1 * l2, 1e-30) / budget)
    for _ in range(200):
        n = _axis_count(grid.x_cuts, h) * _axis_count(grid.y_cuts, h)
        if n <= budget:
            return h
        h *= 1.25
    raise BudgetExceeded(n, budget)


def approximate_integral_frechet(t1: PolygonalCurve, t2: PolygonalCurve,
                                 cfg: GraphConfig) -> ApproxResult:
    """Approximate the integral distance and return the realizing matching.

    Builds the graphs requested by ``cfg.mode``, runs the shortest-path
    search on each, and keeps the minimum; the value is always an upper
    bound on the true distance because every graph path is a feasible
    monotone matching.  ``mode='oracle'`` runs the dense lattice instead.
    """
    total_len = t1.length + t2.length
    graph_stats = {}
    if cfg.mode == "oracle":
        h = _affordable_mesh(t1, t2, cfg.max_vertices)
        value, pts = dense_grid_oracle_path(t1, t2, h, max_points=cfg.max_vertices)
        graph_stats["oracle"] = {
            "status": "ok",
            "mesh": h,
            "vertices": len(pts),
            "edges": 0,
            "distance": value,
        }
        return ApproxResult(
            value=value,
            average=value / total_len,
            winning_mode="oracle",
            path=MonotonePath.from_points(pts),
            graph_stats=graph_stats,
        )

    wanted = ("g1", "g2") if cfg.mode == "both" else (cfg.mode,)
    builders = {"g1": build_g1, "g2": build_g2}
    best = None
    saw_budget = False
    for name in wanted:
        try:
            g = builders[name](t1, t2, cfg)
        except BudgetExceeded as exc:
            graph_stats[name] = {
                "status": "budget_exceeded",
                "projected_vertices": exc.projected,
                "vertices": 0,
                "edges": 0,
                "distance": None,
            }
            saw_budget = True
            continue
        res = dijkstra(g)
        entry = {
            "status": "ok" if res.reachable else "disconnected",
            "vertices": g.n_vertices,
            "edges": g.n_edges,
            "distance": res.distance if res.reachable else None,
        }
        graph_stats[name] = entry
        if res.reachable and (best is None or res.distance < best[0]):
            best = (res.distance, name, res)
    if best is None:
        if saw_budget and all(
            st["status"] == "budget_exceeded" for st in graph_stats.values()
        ):
            raise NoFeasibleGraph(
                "every requested graph exceeds the vertex budget "
                f"{cfg.max_vertices}: "
                + ", ".join(
                    f"{name} projected {st['projected_vertices']}"
                    for name, st in graph_stats.items()
                )
            )
        raise Disconnected(f"no finite route; graph stats: {graph_stats}")
    value, name, res = best
    return ApproxResult(
        value=value,
        average=value / total_len,
        winning_mode=name,
        path=MonotonePath.from_points(res.points),
        graph_stats=graph_stats,
    )
