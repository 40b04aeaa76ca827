"""
One landmark, large and small supports
======================================

Move (0.5, 0.5) to (0.6, 0.7) and look at the smallest Jacobian determinant
on the unit square.  Supports just above the tabulated bound keep it
positive; a support of 0.15 folds the grid.  Grids are written as SVG.
"""

from pathlib import Path

from csrbf import ALL_FAMILIES, Kernel, det_field, fit
from csrbf.cli import FIGURES, ONE_LANDMARK
from csrbf.render import GridSpec, deform_grid

out = Path("demo_output")
out.mkdir(exist_ok=True)

supports = FIGURES["4.1"][1]
for fam in ALL_FAMILIES:
    for c in (supports[fam.name], 0.15):
        t = fit(Kernel(fam, c), ONE_LANDMARK)
        field = det_field(t, (0, 1, 0, 1), (200, 200))
        doc = deform_grid(t, GridSpec(), ONE_LANDMARK, title=f"{fam.label}, c = {c:g}")
        path = out / f"one_landmark_{fam.name}_c{c:g}.svg"
        path.write_text(doc.to_svg())
        print(f"{fam.name:>13} c={c:<5g} min det {field.min_det:+.4f}  folded {field.negative_fraction:6.2%}  -> {path}")
