"""Parameter space of a curve pair: cells, weight function and free-space axes.

The parameter space is the rectangle [0, |T1|] x [0, |T2|]; a point (x, y)
maps to the point pair (T1(x), T2(y)) and its weight is the Euclidean
distance between them.  Each segment pair spans an axis-aligned cell on
which the squared weight is a quadratic form

    w^2(xi, eta) = xi^2 - 2 c xi eta + eta^2 - 2 du xi + 2 dv eta + |d0|^2

in cell-local coordinates, where u and v are the unit segment directions,
c = u . v, d0 the offset between the segment start points, du = d0 . u and
dv = d0 . v.  The sublevel sets are ellipse slices whose monotone principal
axis (slope +1) carries the in-cell shortest paths.
"""

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional

import numpy as np

from .curves import PolygonalCurve
from .errors import AntiparallelCell, OutOfRange

__all__ = [
    "ParameterPoint",
    "ParameterCell",
    "CellGrid",
    "FreeSpaceAxes",
    "EllipseSlice",
    "GridEdge",
    "weight",
    "build_cells",
    "free_space_axes",
    "edge_min",
    "ellipse_slice",
]

# |u . v| above this is treated as parallel/antiparallel (center ~ 1/(1-c^2))
_DEGENERACY_TOL = 1e-9
# half-open clip tolerance so shared corners belong to both cells' axes
_CLIP_TOL = 1e-12


class ParameterPoint(NamedTuple):
    x: float
    y: float


def dominates(a, b, tol: float = 0.0) -> bool:
    """True if ``a <= b`` componentwise (xy-dominance), up to ``tol``."""
    return a[0] <= b[0] + tol and a[1] <= b[1] + tol


@dataclass(frozen=True)
class ParameterCell:
    """One segment-by-segment rectangle of parameter space."""

    i: int                 # column: segment index into T1
    j: int                 # row: segment index into T2
    x0: float
    x1: float
    y0: float
    y1: float
    a0: np.ndarray         # T1 vertex at arc length x0
    u: np.ndarray          # unit direction of T1 segment i
    b0: np.ndarray         # T2 vertex at arc length y0
    v: np.ndarray          # unit direction of T2 segment j
    c: float               # u . v
    kind: str              # 'generic' | 'parallel' | 'antiparallel'
    du: float = field(repr=False, default=0.0)   # d0 . u
    dv: float = field(repr=False, default=0.0)   # d0 . v
    d0sq: float = field(repr=False, default=0.0)  # |d0|^2

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    def local(self, x, y):
        return x - self.x0, y - self.y0

    def weight_sq(self, x, y):
        """Squared weight at global parameter coordinates (scalar or array)."""
        xi, eta = self.local(x, y)
        q = (
            xi * xi
            - 2.0 * self.c * xi * eta
            + eta * eta
            - 2.0 * self.du * xi
            + 2.0 * self.dv * eta
            + self.d0sq
        )
        return np.maximum(q, 0.0) if isinstance(q, np.ndarray) else max(q, 0.0)

    def weight_at(self, x, y):
        return np.sqrt(self.weight_sq(x, y))

    def leash(self, x, y) -> np.ndarray:
        """Vector T2(y) - T1(x) for a point of this cell."""
        xi, eta = self.local(x, y)
        return (self.b0 + eta * self.v) - (self.a0 + xi * self.u)

    def contains(self, p, tol: float = 1e-9) -> bool:
        return (
            self.x0 - tol <= p[0] <= self.x1 + tol
            and self.y0 - tol <= p[1] <= self.y1 + tol
        )

    @property
    def axis_intercept(self) -> float:
        """Intercept k of the monotone axis line y - x = k in global coordinates.

        Computed as -(du + dv)/(1 + c), which stays stable for c -> 1.
        """
        if self.kind == "antiparallel":
            raise AntiparallelCell(f"cell ({self.i},{self.j}) has no monotone axis")
        return (self.y0 - self.x0) - (self.du + self.dv) / (1.0 + self.c)

    def corner_weights(self):
        return [
            float(self.weight_at(x, y))
            for x in (self.x0, self.x1)
            for y in (self.y0, self.y1)
        ]

    def min_weight(self) -> float:
        """Minimum weight over the closed cell rectangle."""
        best = min(self.corner_weights())
        # interior/boundary candidates of the convex quadratic
        cands = []
        if self.kind != "antiparallel" and abs(self.c) < 1.0 - _DEGENERACY_TOL:
            den = 1.0 - self.c * self.c
            xi = (self.du - self.c * self.dv) / den
            eta = (self.c * self.du - self.dv) / den
            if 0 <= xi <= self.width and 0 <= eta <= self.height:
                cands.append((self.x0 + xi, self.y0 + eta))
        for xi_fix in (0.0, self.width):
            eta = self.c * xi_fix - self.dv  # argmin over eta at fixed xi
            if 0 <= eta <= self.height:
                cands.append((self.x0 + xi_fix, self.y0 + eta))
        for eta_fix in (0.0, self.height):
            xi = self.c * eta_fix + self.du
            if 0 <= xi <= self.width:
                cands.append((self.x0 + xi, self.y0 + eta_fix))
        for x, y in cands:
            best = min(best, float(self.weight_at(x, y)))
        return best

    def max_corner_weight(self) -> float:
        return max(self.corner_weights())


@dataclass(frozen=True)
class GridEdge:
    """One cell-boundary segment of the parameter grid.

    A vertical edge lies on the line x = ``fixed`` and spans
    [``lo``, ``hi``] in y; a horizontal edge swaps the roles.
    ``line_index`` is the index of the parameter line, ``span_index`` the
    segment index along the other curve.
    """

    vertical: bool
    fixed: float
    lo: float
    hi: float
    line_index: int
    span_index: int

    @property
    def endpoints(self):
        if self.vertical:
            return ParameterPoint(self.fixed, self.lo), ParameterPoint(self.fixed, self.hi)
        return ParameterPoint(self.lo, self.fixed), ParameterPoint(self.hi, self.fixed)


@dataclass(frozen=True)
class CellGrid:
    """All parameter cells of a curve pair plus coordinate lookups."""

    t1: PolygonalCurve
    t2: PolygonalCurve
    x_cuts: np.ndarray
    y_cuts: np.ndarray
    cells: list

    @property
    def n_cols(self) -> int:
        return len(self.x_cuts) - 1

    @property
    def n_rows(self) -> int:
        return len(self.y_cuts) - 1

    @property
    def extent(self):
        return float(self.x_cuts[-1]), float(self.y_cuts[-1])

    @property
    def source(self) -> ParameterPoint:
        return ParameterPoint(0.0, 0.0)

    @property
    def sink(self) -> ParameterPoint:
        return ParameterPoint(float(self.x_cuts[-1]), float(self.y_cuts[-1]))

    def cell(self, i: int, j: int) -> ParameterCell:
        return self.cells[i][j]

    def locate(self, x: float, y: float, prefer_lower: bool = False):
        """Cell indices (i, j) containing (x, y); boundaries resolve upward
        unless ``prefer_lower``."""
        side = "left" if prefer_lower else "right"
        i = int(np.searchsorted(self.x_cuts, x, side=side)) - 1
        j = int(np.searchsorted(self.y_cuts, y, side=side)) - 1
        return (
            min(max(i, 0), self.n_cols - 1),
            min(max(j, 0), self.n_rows - 1),
        )

    def cell_at(self, p, prefer_lower: bool = False) -> ParameterCell:
        i, j = self.locate(p[0], p[1], prefer_lower=prefer_lower)
        return self.cells[i][j]

    def edges(self) -> Iterator[GridEdge]:
        """All cell-boundary edges, including the ones on the outer boundary."""
        for li, x in enumerate(self.x_cuts):
            for j in range(self.n_rows):
                yield GridEdge(True, float(x), float(self.y_cuts[j]), float(self.y_cuts[j + 1]), li, j)
        for lj, y in enumerate(self.y_cuts):
            for i in range(self.n_cols):
                yield GridEdge(False, float(y), float(self.x_cuts[i]), float(self.x_cuts[i + 1]), lj, i)


@dataclass(frozen=True)
class FreeSpaceAxes:
    """Principal axes of a cell's ellipse family.

    ``center`` is the unconstrained minimizer of the squared weight (it may
    lie far outside the cell); ``ell`` is the slope +1 line through it
    clipped to the cell (None when the line misses the cell), ``hbar`` the
    slope -1 counterpart (None for parallel cells).  Along ``ell`` the
    weight is w(t) = hypot(w_center, slope * t) with t the L1 offset from
    the center, which degenerates to a single-kink piecewise-linear map
    because w_center is zero for every non-parallel cell.
    """

    cell: ParameterCell
    center: ParameterPoint
    intercept: float        # k of the axis line y = x + k
    slope: float            # dw per unit of L1 travel along ell: |u - v| / 2
    w_center: float
    ell: Optional[tuple]
    hbar: Optional[tuple]

    def w_at(self, t: float) -> float:
        """Weight at L1 offset ``t`` from the center along the axis line."""
        return math.hypot(self.w_center, self.slope * t)

    def point_at(self, t: float) -> ParameterPoint:
        return ParameterPoint(self.center.x + 0.5 * t, self.center.y + 0.5 * t)

    def l1_of(self, p) -> float:
        """L1 offset of an on-axis point from the center."""
        return (p[0] - self.center.x) + (p[1] - self.center.y)


def weight(t1: PolygonalCurve, t2: PolygonalCurve, p) -> float:
    """Euclidean distance between T1(p.x) and T2(p.y)."""
    a = t1.point_at(p[0])
    b = t2.point_at(p[1])
    return float(np.linalg.norm(b - a))


def weight_many(t1: PolygonalCurve, t2: PolygonalCurve, xs, ys) -> np.ndarray:
    """Vectorized :func:`weight` over coordinate arrays."""
    d = t2.points_at(np.asarray(ys, dtype=float)) - t1.points_at(np.asarray(xs, dtype=float))
    return np.linalg.norm(d, axis=-1)


def _make_cell(t1, t2, i, j, x_cuts, y_cuts) -> ParameterCell:
    u = t1.directions[i]
    v = t2.directions[j]
    c = float(np.dot(u, v))
    d0 = t2.vertices[j] - t1.vertices[i]
    if c >= 1.0 - _DEGENERACY_TOL:
        kind = "parallel"
        c = 1.0
    elif c <= -1.0 + _DEGENERACY_TOL:
        kind = "antiparallel"
        c = -1.0
    else:
        kind = "generic"
    return ParameterCell(
        i=i, j=j,
        x0=float(x_cuts[i]), x1=float(x_cuts[i + 1]),
        y0=float(y_cuts[j]), y1=float(y_cuts[j + 1]),
        a0=t1.vertices[i], u=u, b0=t2.vertices[j], v=v,
        c=c, kind=kind,
        du=float(np.dot(d0, u)), dv=float(np.dot(d0, v)), d0sq=float(np.dot(d0, d0)),
    )


def build_cells(t1: PolygonalCurve, t2: PolygonalCurve) -> CellGrid:
    """One cell per segment pair: columns follow T1, rows follow T2."""
    x_cuts = t1.cum_length
    y_cuts = t2.cum_length
    cells = [
        [_make_cell(t1, t2, i, j, x_cuts, y_cuts) for j in range(t2.n_segments)]
        for i in range(t1.n_segments)
    ]
    return CellGrid(t1=t1, t2=t2, x_cuts=x_cuts, y_cuts=y_cuts, cells=cells)


def _clip_slope1(k: float, x0, x1, y0, y1):
    """Clip y = x + k to a rectangle; returns sorted endpoints or None."""
    lo = max(x0, y0 - k)
    hi = min(x1, y1 - k)
    if lo > hi + _CLIP_TOL:
        return None
    hi = max(lo, hi)
    return ParameterPoint(lo, lo + k), ParameterPoint(hi, hi + k)


def _clip_slope_neg1(k: float, x0, x1, y0, y1):
    """Clip y = -x + k to a rectangle; endpoints ordered by x."""
    lo = max(x0, k - y1)
    hi = min(x1, k - y0)
    if lo > hi + _CLIP_TOL:
        return None
    hi = max(lo, hi)
    return ParameterPoint(lo, k - lo), ParameterPoint(hi, k - hi)


def free_space_axes(cell: ParameterCell) -> FreeSpaceAxes:
    """Axes of the cell's weight quadratic.

    For a generic cell the center solves the 2x2 normal equations of the
    quadratic (Hessian [[1, -c], [-c, 1]], eigenvectors (1, 1) and
    (1, -1)), so the monotone axis always has slope +1.  Parallel cells
    keep the whole minimizing slope +1 line and leave ``hbar`` undefined.
    Antiparallel cells raise :class:`AntiparallelCell`.
    """
    if cell.kind == "antiparallel":
        raise AntiparallelCell(f"cell ({cell.i},{cell.j}) is antiparallel")
    k = cell.axis_intercept
    slope = 0.5 * float(np.linalg.norm(cell.u - cell.v))
    if cell.kind == "parallel":
        # any point of the minimizing line works; pick the one nearest the
        # cell midpoint so the reported center is well scaled
        xm = 0.5 * (cell.x0 + cell.x1)
        ym = 0.5 * (cell.y0 + cell.y1)
        cx = 0.5 * (xm + ym - k)
        center = ParameterPoint(cx, cx + k)
        w_center = float(cell.weight_at(center.x, center.y))
        hbar = None
    else:
        den = 1.0 - cell.c * cell.c
        xi = (cell.du - cell.c * cell.dv) / den
        eta = (cell.c * cell.du - cell.dv) / den
        center = ParameterPoint(cell.x0 + xi, cell.y0 + eta)
        # u and v span the plane, so the unconstrained minimum is exactly 0;
        # evaluating the quadratic at a far-away center would lose precision
        w_center = 0.0
        hbar = _clip_slope_neg1(center.x + center.y, cell.x0, cell.x1, cell.y0, cell.y1)
    ell = _clip_slope1(k, cell.x0, cell.x1, cell.y0, cell.y1)
    return FreeSpaceAxes(
        cell=cell, center=center, intercept=k, slope=slope,
        w_center=w_center, ell=ell, hbar=hbar,
    )


def edge_min(grid: CellGrid, edge: GridEdge):
    """Minimizer of the weight along a cell-grid edge.

    One curve point is pinned at a parameter line, the other runs along a
    segment, so this is a point-to-segment distance: project and clamp.
    Returns ``(point, weight)``.
    """
    if edge.vertical:
        q = grid.t1.point_at(edge.fixed)
        moving = grid.t2
        j = edge.span_index
        base = moving.vertices[j]
        d = moving.directions[j]
        t = float(np.dot(q - base, d))
        t = min(max(t, 0.0), edge.hi - edge.lo)
        p = ParameterPoint(edge.fixed, edge.lo + t)
        w = float(np.linalg.norm(q - (base + t * d)))
    else:
        q = grid.t2.point_at(edge.fixed)
        moving = grid.t1
        i = edge.span_index
        base = moving.vertices[i]
        d = moving.directions[i]
        t = float(np.dot(q - base, d))
        t = min(max(t, 0.0), edge.hi - edge.lo)
        p = ParameterPoint(edge.lo + t, edge.fixed)
        w = float(np.linalg.norm(q - (base + t * d)))
    return p, w


@dataclass(frozen=True)
class EllipseSlice:
    """Sublevel set {w <= delta} of one cell, described by its boundary crossings.

    ``coeffs`` are the five free coefficients of the local quadratic
    (c, -2 du, +2 dv, |d0|^2) with the unit diagonal implied; ``crossings``
    maps each cell side to the parameter values (global coordinates along
    that side) where w == delta.
    """

    cell: ParameterCell
    delta: float
    coeffs: tuple
    crossings: dict

    @property
    def is_empty(self) -> bool:
        return self.cell.min_weight() > self.delta + 1e-12

    @property
    def is_full(self) -> bool:
        return self.cell.max_corner_weight() <= self.delta + 1e-12

    def contains(self, p, tol: float = 1e-12) -> bool:
        return self.cell.contains(p) and float(
            self.cell.weight_sq(p[0], p[1])
        ) <= self.delta * self.delta + tol


def _edge_crossings(cell, delta, horizontal_side):
    """Solve w^2 = delta^2 along one cell side; returns global coordinates."""
    d2 = delta * delta
    out = []
    if horizontal_side is not None:
        # eta fixed: xi^2 - 2(c eta + du) xi + (eta^2 + 2 dv eta + d0sq - d2) = 0
        eta = horizontal_side
        b = cell.c * eta + cell.du
        cc = eta * eta + 2.0 * cell.dv * eta + cell.d0sq - d2
        disc = b * b - cc
        if disc >= 0.0:
            r = math.sqrt(disc)
            for xi in (b - r, b + r):
                if -1e-12 <= xi <= cell.width + 1e-12:
                    out.append(cell.x0 + min(max(xi, 0.0), cell.width))
    return sorted(set(out))


def _edge_crossings_vertical(cell, delta, xi_fixed):
    d2 = delta * delta
    out = []
    b = cell.c * xi_fixed - cell.dv
    cc = xi_fixed * xi_fixed - 2.0 * cell.du * xi_fixed + cell.d0sq - d2
    disc = b * b - cc
    if disc >= 0.0:
        r = math.sqrt(disc)
        for eta in (b - r, b + r):
            if -1e-12 <= eta <= cell.height + 1e-12:
                out.append(cell.y0 + min(max(eta, 0.0), cell.height))
    return sorted(set(out))


def ellipse_slice(cell: ParameterCell, delta: float) -> EllipseSlice:
    """Descriptor of {w <= delta} within a cell (possibly empty or full)."""
    if delta < 0:
        raise OutOfRange("delta must be nonnegative")
    crossings = {
        "bottom": _edge_crossings(cell, delta, 0.0),
        "top": _edge_crossings(cell, delta, cell.height),
        "left": _edge_crossings_vertical(cell, delta, 0.0),
        "right": _edge_crossings_vertical(cell, delta, cell.width),
    }
    coeffs = (cell.c, -2.0 * cell.du, 2.0 * cell.dv, cell.d0sq)
    return EllipseSlice(cell=cell, delta=delta, coeffs=coeffs, crossings=crossings)
