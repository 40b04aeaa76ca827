"""
Compactly supported kernels
===========================

Four radial profiles that vanish beyond a support radius ``c``.  Wendland's
and Wu's functions stay non-negative; the two Gneiting profiles dip below
zero before returning to zero at the boundary.
"""

import numpy as np

from csrbf import ALL_FAMILIES, Kernel
from csrbf.kernels import turning_bands_reference

# tabulate the profiles on the normalized radius s = r / c
s = np.linspace(0.0, 1.0, 11)
print("s     " + "".join(f"{f.name:>14}" for f in ALL_FAMILIES))
for i, si in enumerate(s):
    print(f"{si:4.1f}  " + "".join(f"{float(f.profile(si)):14.6f}" for f in ALL_FAMILIES))

# scaling: Phi_c(r) = phi(r / c), so doubling c stretches the profile
k1, k2 = Kernel(ALL_FAMILIES[2], 1.0), Kernel(ALL_FAMILIES[2], 2.0)
print("\nvalue at r=0.5, c=1:", float(k1.value(0.5)), " value at r=1, c=2:", float(k2.value(1.0)))

# the Gneiting family comes from a dimension walk applied to a truncated
# power function; the two constructions agree to rounding
for l in (3.5, 5.0):
    gap = np.max(np.abs(turning_bands_reference(l, s) - ALL_FAMILIES[2 if l == 3.5 else 3].profile(s)))
    print(f"l={l}: turning-bands construction differs by {gap:.1e}")

# the derivative is what controls topology, and it is steepest well inside the support
for f in ALL_FAMILIES:
    grid = np.linspace(0, 1, 100001)
    d = f.profile_deriv(grid)
    print(f"{f.name:>13}: steepest slope {d.min():.5f} at s={grid[d.argmin()]:.4f}")
