#!/usr/bin/env python3
"""Render example parameter-space diagrams to out/.

Produces SVGs for the perpendicular single-cell instance and a small
random pair: cell grid, free-space axes, a few ellipse slices, and the
computed optimal path.

Usage: python scripts/render_demo.py [--outdir out]
"""

import argparse
import pathlib

import ifd
from ifd.cli import render_svg


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default="out")
    args = ap.parse_args()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    cases = {
        "perpendicular": (
            ifd.build_curve([(0, 0), (1, 0)]),
            ifd.build_curve([(0, 0), (0, 1)]),
            [0.25, 0.5, 1.0],
        ),
        "bent_pair": (
            ifd.build_curve([(0, 0), (0.6, 0.3), (1.2, 0.0)]),
            ifd.build_curve([(0, 0.5), (0.7, 0.9), (1.3, 0.4)]),
            [0.3, 0.6],
        ),
    }
    for name, (t1, t2, deltas) in cases.items():
        cfg = ifd.GraphConfig.desk(epsilon=0.25, c_g1=20.0)
        res = ifd.approximate_integral_frechet(t1, t2, cfg)
        svg = render_svg(t1, t2, {"path": res.path, "deltas": deltas})
        target = outdir / f"{name}.svg"
        target.write_text(svg)
        print(f"{name}: value={res.value:.6f} via {res.winning_mode} -> {target}")


if __name__ == "__main__":
    main()
