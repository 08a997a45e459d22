import math

import numpy as np
import pytest

import ifd
from ifd.errors import AntiparallelCell
from ifd.param_space import weight_many

from helpers import (
    ANTIPARALLEL,
    PARALLEL,
    PERPENDICULAR,
    curve_pair,
    random_cell,
    random_curve,
)


def test_weight_examples():
    t = ifd.build_curve([(0, 0), (1, 0), (1, 1)])
    assert ifd.weight(t, t, (0.7, 0.7)) == pytest.approx(0.0, abs=1e-15)

    t1, t2 = curve_pair(PARALLEL)
    assert ifd.weight(t1, t2, (0.3, 0.3)) == pytest.approx(1.0)

    t1, t2 = curve_pair(PERPENDICULAR)
    assert ifd.weight(t1, t2, (0.3, 0.4)) == pytest.approx(0.5)


def test_build_cells_shapes():
    t1, t2 = curve_pair(PARALLEL)
    g = ifd.build_cells(t1, t2)
    assert g.n_cols == 1 and g.n_rows == 1
    assert g.cell(0, 0).width == 1.0 and g.cell(0, 0).height == 1.0

    t1 = ifd.build_curve([(0, 0), (1, 0), (2, 0)])
    t2 = ifd.build_curve([(0, 1), (1, 1), (2, 1), (3, 1)])
    g = ifd.build_cells(t1, t2)
    assert g.n_cols == 2 and g.n_rows == 3

    t1 = ifd.build_curve([(0, 0), (3, 0), (3, 4)])
    t2 = ifd.build_curve([(0, 1), (1, 1)])
    g = ifd.build_cells(t1, t2)
    assert [g.cell(i, 0).width for i in range(2)] == [3.0, 4.0]
    assert g.cell(0, 0).height == 1.0


def test_perpendicular_axes():
    t1, t2 = curve_pair(PERPENDICULAR)
    cell = ifd.build_cells(t1, t2).cell(0, 0)
    ax = ifd.free_space_axes(cell)
    assert np.allclose(ax.center, (0.0, 0.0), atol=1e-12)
    assert np.allclose(ax.ell[0], (0.0, 0.0)) and np.allclose(ax.ell[1], (1.0, 1.0))
    # weight grows linearly with slope |u-v|/2 per L1 unit along the axis
    for t in np.linspace(0, 2, 9):
        p = ax.point_at(t)
        assert ax.w_at(t) == pytest.approx(math.sqrt(2) * t / 2, abs=1e-12)
        assert ax.w_at(t) == pytest.approx(ifd.weight(t1, t2, p), abs=1e-12)


def test_parallel_axes():
    t1, t2 = curve_pair(PARALLEL)
    cell = ifd.build_cells(t1, t2).cell(0, 0)
    ax = ifd.free_space_axes(cell)
    assert ax.slope == 0.0
    assert ax.hbar is None
    assert np.allclose(ax.ell[0], (0.0, 0.0)) and np.allclose(ax.ell[1], (1.0, 1.0))
    for t in (-0.4, 0.0, 0.7):
        assert ax.w_at(t) == pytest.approx(1.0)


def test_antiparallel_axes_raise():
    t1, t2 = curve_pair(ANTIPARALLEL)
    cell = ifd.build_cells(t1, t2).cell(0, 0)
    assert cell.kind == "antiparallel"
    with pytest.raises(AntiparallelCell):
        ifd.free_space_axes(cell)


def test_edge_min_examples():
    t1, t2 = curve_pair(PERPENDICULAR)
    g = ifd.build_cells(t1, t2)
    left = [e for e in g.edges() if e.vertical and e.fixed == 0.0][0]
    u, w = ifd.edge_min(g, left)
    assert np.allclose(u, (0.0, 0.0)) and w == pytest.approx(0.0)

    t1, t2 = curve_pair(PARALLEL)
    g = ifd.build_cells(t1, t2)
    left = [e for e in g.edges() if e.vertical and e.fixed == 0.0][0]
    u, w = ifd.edge_min(g, left)
    assert np.allclose(u, (0.0, 0.0)) and w == pytest.approx(1.0)
    top = [e for e in g.edges() if not e.vertical and e.fixed == 1.0][0]
    u, w = ifd.edge_min(g, top)
    assert np.allclose(u, (1.0, 1.0)) and w == pytest.approx(1.0)


def test_ellipse_slice_quarter_disc():
    t1, t2 = curve_pair(PERPENDICULAR)
    cell = ifd.build_cells(t1, t2).cell(0, 0)
    s = ifd.ellipse_slice(cell, 0.5)
    assert s.crossings["bottom"] == [pytest.approx(0.5)]
    assert s.crossings["left"] == [pytest.approx(0.5)]
    assert s.crossings["top"] == [] and s.crossings["right"] == []
    assert s.contains((0.3, 0.3))
    assert not s.contains((0.5, 0.5))


def test_ellipse_slice_degenerate_and_full():
    t1, t2 = curve_pair(PERPENDICULAR)
    cell = ifd.build_cells(t1, t2).cell(0, 0)
    zero = ifd.ellipse_slice(cell, 0.0)
    assert not zero.is_empty  # center (0,0) is a cell corner
    assert zero.contains((0.0, 0.0))
    full = ifd.ellipse_slice(cell, cell.max_corner_weight() + 0.1)
    assert full.is_full

    t1, t2 = curve_pair(PARALLEL)
    cell = ifd.build_cells(t1, t2).cell(0, 0)
    assert ifd.ellipse_slice(cell, 0.5).is_empty  # w >= 1 everywhere


def test_ellipse_slice_nesting():
    rng = np.random.default_rng(3)
    for _ in range(25):
        _, cell = random_cell(rng)
        d1, d2 = np.sort(rng.uniform(0.0, cell.max_corner_weight(), 2))
        inner = ifd.ellipse_slice(cell, float(d1))
        outer = ifd.ellipse_slice(cell, float(d2))
        for side in ("bottom", "top"):
            y = cell.y0 if side == "bottom" else cell.y1
            for x in inner.crossings[side]:
                assert outer.contains((x, y), tol=1e-9)
        for side in ("left", "right"):
            x = cell.x0 if side == "left" else cell.x1
            for y in inner.crossings[side]:
                assert outer.contains((x, y), tol=1e-9)


def test_weight_is_1lipschitz_l1():
    rng = np.random.default_rng(4)
    for _ in range(10):
        t1 = random_curve(rng, int(rng.integers(1, 6)))
        t2 = random_curve(rng, int(rng.integers(1, 6)))
        n = 2000
        xs = rng.uniform(0, t1.length, (2, n))
        ys = rng.uniform(0, t2.length, (2, n))
        w1 = weight_many(t1, t2, xs[0], ys[0])
        w2 = weight_many(t1, t2, xs[1], ys[1])
        d1 = np.abs(xs[0] - xs[1]) + np.abs(ys[0] - ys[1])
        assert np.all(w1 <= w2 + d1 + 1e-9)


def test_axis_duality():
    # on the monotone axis the leash is perpendicular to the bisector of u, v
    rng = np.random.default_rng(5)
    for _ in range(30):
        _, cell = random_cell(rng)
        ax = ifd.free_space_axes(cell)
        if ax.ell is None:
            continue
        bis = cell.u + cell.v
        bis = bis / np.linalg.norm(bis)
        p, q = ax.ell
        for f in np.linspace(0, 1, 7):
            x = p.x + f * (q.x - p.x)
            y = p.y + f * (q.y - p.y)
            leash = cell.leash(x, y)
            assert abs(float(np.dot(leash, bis))) <= 1e-9


def test_axis_weight_piecewise_linear():
    rng = np.random.default_rng(6)
    for _ in range(30):
        grid, cell = random_cell(rng)
        ax = ifd.free_space_axes(cell)
        if ax.ell is None:
            continue
        p, q = ax.ell
        for f in np.linspace(0, 1, 100):
            x = p.x + f * (q.x - p.x)
            y = p.y + f * (q.y - p.y)
            t = ax.l1_of((x, y))
            direct = ifd.weight(grid.t1, grid.t2, (x, y))
            assert ax.w_at(t) == pytest.approx(direct, abs=1e-10)


def test_locate_prefers_requested_side():
    t1 = ifd.build_curve([(0, 0), (1, 0), (2, 0)])
    t2 = ifd.build_curve([(0, 1), (1, 1), (2, 1)])
    g = ifd.build_cells(t1, t2)
    assert g.locate(1.0, 0.5, prefer_lower=True)[0] == 0
    assert g.locate(1.0, 0.5, prefer_lower=False)[0] == 1
    assert g.locate(0.0, 0.0, prefer_lower=True) == (0, 0)
    assert g.locate(2.0, 2.0) == (1, 1)
