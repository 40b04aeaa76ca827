"""
Four landmarks in a rhombus
===========================

Landmarks at (0, 1), (-1, 0), (0, -1), (1, 0); only the lower one moves down
by ``delta``.  The interpolation system has closed-form solutions, so the
determinant along the upper axis can be evaluated exactly.

The classical large-support estimate ``1 - K delta (y^2+1 - y sqrt(y^2+1))``
with ``K = (3/8)/(2 - sqrt 2)`` misses a constant ``delta/2``: the exact
values converge to the estimate plus ``delta/2``.
"""

import numpy as np

from csrbf import ALL_FAMILIES, Kernel
from csrbf.four_landmark import (
    RhombusCase,
    asymptotic_axis_det,
    asymptotic_constant,
    axis_det,
    large_support_axis_det,
    rhombus_coefficients,
)

delta = 0.2
print("K =", asymptotic_constant())
co = rhombus_coefficients(RhombusCase(delta, Kernel(ALL_FAMILIES[2], 100.0)))
print("coefficients at c=100:", np.round(co.c2, 3))

ys = np.array([1.25, 1.5, 2.0, 3.0, 5.0])
print("\ny      " + "".join(f"{f.name:>14}" for f in ALL_FAMILIES) + "    classical     corrected")
for y in ys:
    vals = [axis_det(RhombusCase(delta, Kernel(f, 100.0)), y) for f in ALL_FAMILIES]
    print(f"{y:5.2f}  " + "".join(f"{v:14.5f}" for v in vals)
          + f"{asymptotic_axis_det(delta, y):13.5f}{large_support_axis_det(delta, y):14.5f}")

# the gap to the classical estimate settles at delta/2 as c grows
for c in (100.0, 1000.0, 5000.0):
    gap = axis_det(RhombusCase(delta, Kernel(ALL_FAMILIES[2], c)), 2.0) - asymptotic_axis_det(delta, 2.0)
    print(f"c={c:<6g} exact - classical at y=2: {gap:.5f}")
