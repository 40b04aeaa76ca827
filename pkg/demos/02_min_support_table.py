"""
Minimum support sizes
=====================

A single landmark shifted by ``delta`` keeps the deformation one-to-one as
long as ``c > sqrt(2) * |min phi'| * delta``.  The ratio ``c_min / delta``
depends only on the kernel.
"""

from csrbf.support import min_support, table1

print("kernel          r*/c        slope_min   c_min/delta")
for b in table1():
    print(f"{b.family.name:<14}{b.r_star_over_c:10.6f}{b.slope_min:13.6f}{b.c_min_over_delta:12.4f}")

# bounds are linear in the shift
for delta in (0.05, 0.2, 1.0):
    print(f"delta={delta}: Gneiting 7/2 needs c > {min_support(table1()[2].family, delta):.4f}")
