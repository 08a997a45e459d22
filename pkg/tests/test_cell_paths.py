import math

import numpy as np
import pytest

import ifd
from ifd.errors import AntiparallelCell

from helpers import (
    ANTIPARALLEL,
    PARALLEL,
    curve_pair,
    lattice_oracle,
    random_cell,
    random_monotone_pair,
    random_staircase,
)

# frozen from the arsinh antiderivative, cross-checked by quadrature below
CASE2 = 1.5201144097172755
CASE3 = 0.7789500498179603


def _parallel_cell():
    t1, t2 = curve_pair(PARALLEL)
    g = ifd.build_cells(t1, t2)
    return g, g.cell(0, 0)


def test_full_diagonal():
    g, cell = _parallel_cell()
    p = ifd.cell_shortest_path(cell, (0, 0), (1, 1))
    assert p.branch == "through_axis"
    assert p.weighted_length == pytest.approx(2.0, abs=1e-12)
    assert [tuple(v) for v in p.vertices] == [(0.0, 0.0), (1.0, 1.0)]


def test_partial_axis_entry():
    g, cell = _parallel_cell()
    p = ifd.cell_shortest_path(cell, (0, 0.5), (1, 1))
    assert p.branch == "through_axis"
    assert np.allclose(p.vertices[1], (0.5, 0.5))
    assert p.weighted_length == pytest.approx(CASE2, abs=1e-9)
    assert p.weighted_length == pytest.approx(
        ifd.quadrature_weighted_length(g, (0, 0.5), (0.5, 0.5))
        + ifd.quadrature_weighted_length(g, (0.5, 0.5), (1, 1)),
        abs=1e-9,
    )


def test_axis_missed_goes_around_corner():
    g, cell = _parallel_cell()
    p = ifd.cell_shortest_path(cell, (0, 0.6), (0.3, 1))
    assert p.branch == "around_corner"
    assert np.allclose(p.vertices[1], (0.3, 0.6))
    assert p.weighted_length == pytest.approx(CASE3, abs=1e-9)


def test_antiparallel_raises_and_fallback_works():
    t1, t2 = curve_pair(ANTIPARALLEL)
    g = ifd.build_cells(t1, t2)
    cell = g.cell(0, 0)
    with pytest.raises(AntiparallelCell):
        ifd.cell_shortest_path(cell, (0, 0), (1, 1))
    fb = ifd.staircase_fallback_path(cell, (0, 0), (1, 1), k=64)
    assert fb.branch == "degenerate_fallback"
    assert fb.weighted_length == pytest.approx(
        ifd.staircase_cell_oracle(cell, (0, 0), (1, 1), 64), abs=1e-12
    )
    d = np.diff(np.asarray(fb.vertices), axis=0)
    assert (d >= -1e-12).all()


def test_optimality_against_staircase():
    rng = np.random.default_rng(20)
    for _ in range(25):
        grid, cell = random_cell(rng)
        a, b = random_monotone_pair(rng, cell)
        best = ifd.cell_shortest_path(cell, a, b)
        prev = None
        for k in (16, 32, 64, 128):
            val = ifd.staircase_cell_oracle(cell, a, b, k)
            assert best.weighted_length <= val + 1e-10
            if prev is not None:
                assert val <= prev + 1e-12
            prev = val


def test_outputs_monotone_and_inside_cell():
    rng = np.random.default_rng(21)
    for _ in range(50):
        _, cell = random_cell(rng)
        a, b = random_monotone_pair(rng, cell)
        p = ifd.cell_shortest_path(cell, a, b)
        verts = np.asarray(p.vertices)
        assert (np.diff(verts, axis=0) >= -1e-12).all()
        for f in np.linspace(0, 1, 100):
            i = min(int(f * (len(verts) - 1)), len(verts) - 2)
            q = verts[i] + (f * (len(verts) - 1) - i) * (verts[i + 1] - verts[i])
            assert cell.contains(q, tol=1e-9)


def _shared_edge(grid, vertical, fixed):
    return [
        e for e in grid.edges()
        if e.vertical == vertical and abs(e.fixed - fixed) < 1e-12
    ][0]


def test_two_cell_coincident_axis_endpoints():
    t1 = ifd.build_curve([(0, 0), (2, 0)])
    t2 = ifd.build_curve([(0, 1), (1, 1), (2, 1)])
    grid = ifd.build_cells(t1, t2)
    e = _shared_edge(grid, vertical=False, fixed=1.0)
    p = ifd.two_cell_path((0.25, 0.25), (1.75, 1.75), e, grid)
    assert p.branch == "through_axis"
    assert len(p.vertices) == 3
    assert np.allclose(p.vertices[1], (1.0, 1.0))
    assert p.weighted_length == pytest.approx(3.0, abs=1e-12)


def test_two_cell_canonical_four_vertices():
    # axes of the two side-by-side cells end on the shared edge, ordered
    t1 = ifd.build_curve([(0, 0), (1, 0), (1, -1)])
    t2 = ifd.build_curve([(0, 0.5), (2, 0.5)])
    grid = ifd.build_cells(t1, t2)
    e = _shared_edge(grid, vertical=True, fixed=1.0)
    o, p = (0.2, 0.2), (1.4, 1.9)
    path = ifd.two_cell_path(o, p, e, grid)
    assert path.branch == "through_axis"
    assert len(path.vertices) == 4
    assert np.allclose(path.vertices[1], (1.0, 1.0))
    assert np.allclose(path.vertices[2], (1.0, 1.5))
    oracle = lattice_oracle(grid, o, p, 48)
    assert path.weighted_length <= oracle + 1e-10


def test_two_cell_search_branch_crosses_perpendicularly():
    # first cell's axis tops out on the shared edge above the second's start
    t1 = ifd.build_curve([(0, 0), (1, 0), (1, 1)])
    t2 = ifd.build_curve([(0, 0.5), (1.5, 0.5)])
    grid = ifd.build_cells(t1, t2)
    e = _shared_edge(grid, vertical=True, fixed=1.0)
    o, p = (0.3, 0.3), (1.7, 1.2)
    path = ifd.two_cell_path(o, p, e, grid)
    assert path.branch == "around_corner"
    verts = [tuple(v) for v in path.vertices]
    k = [i for i, v in enumerate(verts) if abs(v[0] - 1.0) < 1e-9]
    assert k, "no vertex on the shared edge"
    i = k[0]
    assert 0 < i < len(verts) - 1
    assert verts[i - 1][1] == pytest.approx(verts[i][1], abs=1e-10)
    assert verts[i + 1][1] == pytest.approx(verts[i][1], abs=1e-10)
    oracle = lattice_oracle(grid, o, p, 48)
    assert path.weighted_length <= oracle + 1e-10


def test_two_cell_antiparallel_raises():
    t1 = ifd.build_curve([(0, 0), (1, 0)])
    t2 = ifd.build_curve([(1, 1), (0, 1), (0, 2)])
    grid = ifd.build_cells(t1, t2)
    assert grid.cell(0, 0).kind == "antiparallel"
    e = _shared_edge(grid, vertical=False, fixed=1.0)
    with pytest.raises(AntiparallelCell):
        ifd.two_cell_path((0.5, 0.5), (0.9, 1.5), e, grid)


def test_two_cell_random_adjacent_cells():
    rng = np.random.default_rng(22)
    done = 0
    while done < 8:
        t1 = ifd.build_curve(rng.uniform(-1, 1, (3, 2)))
        t2 = ifd.build_curve(rng.uniform(-1, 1, (2, 2)))
        grid = ifd.build_cells(t1, t2)
        if any(c.kind == "antiparallel" for col in grid.cells for c in col):
            continue
        e = _shared_edge(grid, vertical=True, fixed=float(grid.x_cuts[1]))
        ax_o = ifd.free_space_axes(grid.cell(0, 0))
        ax_p = ifd.free_space_axes(grid.cell(1, 0))
        if ax_o.ell is None or ax_p.ell is None:
            continue
        o = ax_o.ell[0]
        p = ax_p.ell[1]
        if not (o.x <= p.x and o.y <= p.y):
            continue
        path = ifd.two_cell_path(o, p, e, grid)
        oracle = lattice_oracle(grid, o, p, 40)
        # the lattice value is an upper bound with its own discretization gap
        gap = (abs(p.x - o.x) + abs(p.y - o.y)) ** 2 / 40
        assert path.weighted_length <= oracle + 1e-10
        assert oracle <= path.weighted_length + gap + 1e-9
        done += 1


def test_profile_parallel_step():
    g, cell = _parallel_cell()
    path = ifd.cell_shortest_path(cell, (0, 0), (1, 1))
    prof = ifd.partial_similarity_profile(cell, path)
    assert prof.value_at(0.999) == pytest.approx(0.0)
    assert prof.value_at(1.0) == pytest.approx(2.0)
    assert prof.value_at(5.0) == pytest.approx(2.0)
    assert prof.total_l1 == pytest.approx(2.0)


def test_profile_perpendicular_linear():
    t1 = ifd.build_curve([(0, 0), (1, 0)])
    t2 = ifd.build_curve([(0, 0), (0, 1)])
    grid = ifd.build_cells(t1, t2)
    cell = grid.cell(0, 0)
    path = ifd.cell_shortest_path(cell, (0, 0), (1, 1))
    prof = ifd.partial_similarity_profile(cell, path)
    for d in np.linspace(0, 2.0, 21):
        assert prof.value_at(float(d)) == pytest.approx(2 * min(1.0, d / math.sqrt(2)), abs=1e-12)


def test_profile_zero_threshold():
    g, cell = _parallel_cell()
    prof = ifd.partial_similarity_profile(cell, [(0.0, 0.2), (1.0, 0.7)])
    assert prof.value_at(0.0) == 0.0


def test_profile_nondecreasing_and_dominant():
    rng = np.random.default_rng(23)
    for _ in range(15):
        grid, cell = random_cell(rng)
        a, b = random_monotone_pair(rng, cell)
        best = ifd.cell_shortest_path(cell, a, b)
        best_prof = ifd.partial_similarity_profile(cell, best)
        deltas = np.linspace(0.0, cell.max_corner_weight(), 32)
        vals = best_prof.value_at(deltas)
        assert (np.diff(vals) >= -1e-12).all()
        for _ in range(5):
            alt = random_staircase(rng, a, b, steps=3)
            alt_prof = ifd.partial_similarity_profile(cell, alt.vertices)
            assert np.all(best_prof.value_at(deltas) >= alt_prof.value_at(deltas) - 1e-9)
