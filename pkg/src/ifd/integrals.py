"""Exact weighted lengths of straight segments in parameter space.

The weighted length of a segment is the integral of the weight against L1
speed.  Within one cell the squared weight along a straight segment is a
quadratic A s^2 + B s + C in the normalized parameter, so

    integral sqrt(A s^2 + B s + C) ds

has the standard arsinh antiderivative; degenerate branches (constant
weight, weight touching zero) use their own exact forms to avoid
cancellation.  Segments are split at parameter lines first so one
quadratic applies per piece.  An adaptive-Simpson quadrature over the raw
curve evaluations serves as the independent cross-check.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NegativeRadicand, NonConvergence, NotOnAxis
from .param_space import CellGrid, ParameterCell, ParameterPoint, free_space_axes

__all__ = [
    "WeightedSegment",
    "split_at_parameter_lines",
    "weighted_length_axis_aligned",
    "weighted_length_on_axis",
    "weighted_length_general",
    "weighted_length",
    "quadrature_weighted_length",
]

_A_EPS = 1e-14       # below this the leash is constant along the segment
_H_EPS = 1e-12       # point-on-line threshold for the axis-aligned form
_AXIS_TOL = 1e-9     # max deviation from the axis for the on-axis form
_Q_NEG_TOL = -1e-9   # squared weight below this signals bad coefficients


@dataclass(frozen=True)
class WeightedSegment:
    """A straight piece of a path, confined to one cell."""

    a: ParameterPoint
    b: ParameterPoint
    cell: ParameterCell
    kind: str  # 'axis_aligned' | 'on_axis' | 'general'

    @property
    def l1_length(self) -> float:
        return abs(self.b.x - self.a.x) + abs(self.b.y - self.a.y)


def _primitive(t, hsq):
    """Antiderivative of sqrt(t^2 + hsq); exact |t| t / 2 branch for hsq ~ 0."""
    t = np.asarray(t, dtype=float)
    hsq = np.asarray(hsq, dtype=float)
    r = np.sqrt(t * t + hsq)
    safe = np.where(hsq > 0.0, hsq, 1.0)
    with np.errstate(invalid="ignore"):
        curved = 0.5 * (t * r + hsq * np.arcsinh(t / np.sqrt(safe)))
    flat = 0.5 * t * np.abs(t)
    scale = t * t + hsq
    out = np.where(hsq > 1e-30 * np.maximum(scale, 1e-300), curved, flat)
    return out if out.ndim else float(out)


def segment_quad_coeffs(cell: ParameterCell, a, b):
    """(A, B, C, l1len) with w^2(s) = A s^2 + B s + C along a -> b, s in [0, 1]."""
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    l1len = abs(dx) + abs(dy)
    leash_a = cell.leash(a[0], a[1])
    vel = dy * cell.v - dx * cell.u  # leash velocity
    A = float(np.dot(vel, vel))
    B = 2.0 * float(np.dot(leash_a, vel))
    C = float(np.dot(leash_a, leash_a))
    return A, B, C, l1len


def _closed_form(A, B, C, l1len):
    if l1len == 0.0:
        return 0.0
    if A <= _A_EPS * max(1.0, C):
        # constant leash velocity ~ 0, so the weight is (nearly) constant
        return l1len * 0.5 * (math.sqrt(max(C, 0.0)) + math.sqrt(max(A + B + C, 0.0)))
    qmin = C - B * B / (4.0 * A) if 0.0 <= -B / (2.0 * A) <= 1.0 else min(C, A + B + C)
    if qmin < _Q_NEG_TOL:
        raise NegativeRadicand(f"w^2 reaches {qmin:.3e} along the segment")
    hsq = max((4.0 * A * C - B * B) / (4.0 * A * A), 0.0)
    t0 = B / (2.0 * A)
    return l1len * math.sqrt(A) * (_primitive(t0 + 1.0, hsq) - _primitive(t0, hsq))


def weighted_length_general(seg: WeightedSegment) -> float:
    """Closed-form weighted length of an arbitrary in-cell segment."""
    A, B, C, l1len = segment_quad_coeffs(seg.cell, seg.a, seg.b)
    return _closed_form(A, B, C, l1len)


def weighted_length_axis_aligned(seg: WeightedSegment) -> float:
    """Closed form for horizontal/vertical segments.

    One curve point is fixed; with t the signed arc length from the foot of
    its perpendicular onto the moving segment's supporting line and h the
    foot distance, the weight is sqrt(t^2 + h^2) and the arsinh primitive
    applies directly.
    """
    cell = seg.cell
    ax, ay = seg.a
    bx, by = seg.b
    if abs(by - ay) <= abs(bx - ax):
        # horizontal: T2 point fixed at y, T1 moves
        fixed = cell.b0 + (ay - cell.y0) * cell.v
        base, d = cell.a0, cell.u
        s0, s1 = ax - cell.x0, bx - cell.x0
    else:
        fixed = cell.a0 + (ax - cell.x0) * cell.u
        base, d = cell.b0, cell.v
        s0, s1 = ay - cell.y0, by - cell.y0
    rel = fixed - base
    foot = float(np.dot(rel, d))
    perp = rel - foot * d
    hsq = float(np.dot(perp, perp))
    if hsq < _H_EPS * _H_EPS:
        hsq = 0.0
    lo, hi = (s0, s1) if s0 <= s1 else (s1, s0)
    return float(_primitive(hi - foot, hsq) - _primitive(lo - foot, hsq))


def weighted_length_on_axis(seg: WeightedSegment) -> float:
    """Trapezoid rule along the monotone axis, split at the axis minimum.

    The weight is exactly piecewise linear in L1 arc length along the axis
    (single kink at the center), so the trapezoid value is exact.
    """
    axes = free_space_axes(seg.cell)
    k = axes.intercept
    for p in (seg.a, seg.b):
        if abs((p[1] - p[0]) - k) > _AXIS_TOL:
            raise NotOnAxis(f"point {p} deviates from axis y = x + {k:.6g}")
    ta = axes.l1_of(seg.a)
    tb = axes.l1_of(seg.b)
    if ta > tb:
        ta, tb = tb, ta
    knots = [ta, tb]
    if ta < 0.0 < tb:
        knots = [ta, 0.0, tb]
    total = 0.0
    for lo, hi in zip(knots[:-1], knots[1:]):
        total += 0.5 * (axes.w_at(lo) + axes.w_at(hi)) * (hi - lo)
    return total


def weighted_length(seg: WeightedSegment) -> float:
    if seg.kind == "axis_aligned":
        return weighted_length_axis_aligned(seg)
    if seg.kind == "on_axis":
        return weighted_length_on_axis(seg)
    return weighted_length_general(seg)


def _classify(cell: ParameterCell, a, b) -> str:
    if abs(b[0] - a[0]) <= 1e-15 or abs(b[1] - a[1]) <= 1e-15:
        return "axis_aligned"
    if cell.kind != "antiparallel":
        k = cell.axis_intercept
        if abs((a[1] - a[0]) - k) <= _AXIS_TOL and abs((b[1] - b[0]) - k) <= _AXIS_TOL:
            return "on_axis"
    return "general"


def split_at_parameter_lines(grid: CellGrid, a, b):
    """Cut the segment a -> b at every parameter line it crosses.

    Returns the ordered pieces as :class:`WeightedSegment`; each piece lies
    in exactly one cell (boundary pieces resolve to the lower/left cell).
    """
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    dx, dy = bx - ax, by - ay
    params = {0.0, 1.0}
    if abs(dx) > 0.0:
        lo, hi = sorted((ax, bx))
        for cut in grid.x_cuts:
            if lo < cut < hi:
                params.add((cut - ax) / dx)
    if abs(dy) > 0.0:
        lo, hi = sorted((ay, by))
        for cut in grid.y_cuts:
            if lo < cut < hi:
                params.add((cut - ay) / dy)
    svals = sorted(params)
    pieces = []
    for s0, s1 in zip(svals[:-1], svals[1:]):
        p = ParameterPoint(ax + s0 * dx, ay + s0 * dy)
        q = ParameterPoint(ax + s1 * dx, ay + s1 * dy)
        mid = (0.5 * (p.x + q.x), 0.5 * (p.y + q.y))
        cell = grid.cell_at(mid, prefer_lower=True)
        pieces.append(WeightedSegment(a=p, b=q, cell=cell, kind=_classify(cell, p, q)))
    return pieces


def segment_weighted_length(grid: CellGrid, a, b) -> float:
    """Exact weighted length of an arbitrary segment: split, then closed forms."""
    return sum(weighted_length(seg) for seg in split_at_parameter_lines(grid, a, b))


# -- vectorized per-cell kernels (lattice and grid-graph construction) --------


def horizontal_strip_weights(cell: ParameterCell, xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """Weights of horizontal lattice edges between consecutive ``xi`` at each ``eta``.

    Local cell coordinates; returns shape (len(eta), len(xi) - 1).
    """
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    foot = cell.c * eta + cell.du
    q = np.maximum(
        (1.0 - cell.c * cell.c) * eta * eta
        + 2.0 * (cell.dv - cell.c * cell.du) * eta
        + (cell.d0sq - cell.du * cell.du),
        0.0,
    )
    t = xi[None, :] - foot[:, None]
    p = _primitive(t, q[:, None])
    return p[:, 1:] - p[:, :-1]


def vertical_strip_weights(cell: ParameterCell, eta: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """Weights of vertical lattice edges between consecutive ``eta`` at each ``xi``.

    Returns shape (len(eta) - 1, len(xi)).
    """
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    foot = cell.c * xi - cell.dv
    q = np.maximum(
        (1.0 - cell.c * cell.c) * xi * xi
        + 2.0 * (cell.c * cell.dv - cell.du) * xi
        + (cell.d0sq - cell.dv * cell.dv),
        0.0,
    )
    t = eta[:, None] - foot[None, :]
    p = _primitive(t, q[None, :])
    return p[1:, :] - p[:-1, :]


def diagonal_block_weights(cell: ParameterCell, xi0: np.ndarray, eta0: np.ndarray,
                           dxi: float, deta: float) -> np.ndarray:
    """Weights of uniform diagonal steps (dxi, deta) starting at eta0 x xi0.

    Returns shape (len(eta0), len(xi0)).
    """
    xi0 = np.asarray(xi0, dtype=float)
    eta0 = np.asarray(eta0, dtype=float)
    d0 = cell.b0 - cell.a0
    dax = d0[0] + eta0[:, None] * cell.v[0] - xi0[None, :] * cell.u[0]
    day = d0[1] + eta0[:, None] * cell.v[1] - xi0[None, :] * cell.u[1]
    ex = deta * cell.v[0] - dxi * cell.u[0]
    ey = deta * cell.v[1] - dxi * cell.u[1]
    A = ex * ex + ey * ey
    B = 2.0 * (dax * ex + day * ey)
    C = dax * dax + day * day
    l1len = abs(dxi) + abs(deta)
    if l1len == 0.0:
        return np.zeros_like(C)
    cmax = float(C.max()) if C.size else 0.0
    if A <= _A_EPS * max(1.0, cmax):
        return l1len * 0.5 * (np.sqrt(np.maximum(C, 0.0)) + np.sqrt(np.maximum(A + B + C, 0.0)))
    hsq = np.maximum((4.0 * A * C - B * B) / (4.0 * A * A), 0.0)
    t0 = B / (2.0 * A)
    return l1len * math.sqrt(A) * (_primitive(t0 + 1.0, hsq) - _primitive(t0, hsq))


def _simpson(f, lo, hi, f_lo, f_mid, f_hi, tol, depth):
    mid = 0.5 * (lo + hi)
    lm = 0.5 * (lo + mid)
    mh = 0.5 * (mid + hi)
    f_lm = f(lm)
    f_mh = f(mh)
    whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
    left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid)
    right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_mh + f_hi)
    if depth <= 0:
        raise NonConvergence("adaptive Simpson exceeded depth 60")
    err = left + right - whole
    if abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    return _simpson(f, lo, mid, f_lo, f_lm, f_mid, tol / 2.0, depth - 1) + _simpson(
        f, mid, hi, f_mid, f_mh, f_hi, tol / 2.0, depth - 1
    )


def quadrature_weighted_length(grid: CellGrid, a, b, tol: float = 1e-12) -> float:
    """Adaptive-Simpson weighted length of a -> b, split at parameter lines.

    Evaluates the weight from the raw curves (not the cell quadratics), so
    it is an independent oracle for the closed forms.  ``tol`` is relative.
    """
    pieces = split_at_parameter_lines(grid, a, b)
    t1, t2 = grid.t1, grid.t2
    total = 0.0
    for seg in pieces:
        l1len = seg.l1_length
        if l1len == 0.0:
            continue
        pa, pb = seg.a, seg.b

        def f(s):
            x = pa.x + s * (pb.x - pa.x)
            y = pa.y + s * (pb.y - pa.y)
            d = t2.point_at(y) - t1.point_at(x)
            return math.hypot(d[0], d[1]) * l1len

        f0, fm, f1 = f(0.0), f(0.5), f(1.0)
        scale = max(abs(f0), abs(fm), abs(f1), 1e-300)
        total += _simpson(f, 0.0, 1.0, f0, fm, f1, tol * scale, 60)
    return total
