"""Render a small gallery: the stepped-surface patch, its fractal version,
and the three-piece modified domain-exchange partition.

Usage: python demos/fractal_gallery.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from rauzygeom import (
    Chain,
    hokkaido_family,
    modified_partition,
    pisot_split,
    projections,
    rauzy_approx,
    stepped_surface,
)
from rauzygeom.svg import SvgScene, render_patch, type_colors

outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demos/output")
outdir.mkdir(parents=True, exist_ok=True)

sub = hokkaido_family(0)
proj = projections(sub, pisot_split(sub))
seed = Chain.from_faces(
    5, 2, [(1, (0,) * 5, t) for t in [(1, 3), (1, 4), (2, 4), (2, 5), (3, 5)]]
)

patch = stepped_surface(sub, proj, seed, exponent=5, iterations=2)
render_patch(patch).write(outdir / "stepped_surface.svg")
print(f"stepped surface: {len(patch.polygons)} faces -> stepped_surface.svg")

scene = SvgScene()
wtypes = sorted({t for (_b, t), _c in patch.chain.items()})
colors = type_colors(wtypes)
tiles = {t: rauzy_approx(sub, proj, t, 9) for t in wtypes}
for (base, wtype), _c in sorted(patch.chain.items()):
    shift = proj.pi_c(np.array(base))
    for v in tiles[wtype].polygons:
        scene.add_polygon(v + shift, fill=colors[wtype])
scene.write(outdir / "fractal_tiling.svg")
print(f"fractal tiling at level 9 -> fractal_tiling.svg")

scene = SvgScene()
piece_colors = {2: "#1f77b4", 3: "#ff7f0e", 4: "#2ca02c"}
for piece in modified_partition(sub, proj, level=12):
    geoms = getattr(piece.region, "geoms", [piece.region])
    for g in geoms:
        scene.add_polygon(g.exterior.coords, fill=piece_colors[piece.label])
scene.write(outdir / "exchange_partition.svg")
print("modified exchange partition -> exchange_partition.svg")
