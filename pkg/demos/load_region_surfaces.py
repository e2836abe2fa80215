"""
Upper boundary of the per-cell load region
==========================================

Fix the fourth user's target and ask how large the third user's target can
be for every (gamma1, gamma2). An attacker that occupies effective bandwidth
of its own shrinks the region.
"""

import numpy as np

import pilotattack as pa

axis = np.arange(0, 3.0001, 0.05)
clean = pa.region_surface(0.3, 0.0, axis, axis)
attacked = pa.region_surface(0.3, 0.4, axis, axis)
print("eb left for users 1-3:", round(clean.eb_boundary, 6), "vs", round(attacked.eb_boundary, 6))

# %%
# The attacked region sits strictly inside the clean one.
both = clean.inside & attacked.inside
print("attacked inside clean everywhere:", bool(np.all(clean.inside[attacked.inside])))
print("strictly lower where both finite:",
      bool(np.all(attacked.gamma3[both] < clean.gamma3[both])))

# %%
# How much of the plotted box is lost depends on the box. Here the third
# target is capped at the axis maximum and the surfaces are integrated over
# the grid; a different box gives a different percentage.
def box_volume(s, cap=axis[-1]):
    g3 = np.where(s.inside, np.minimum(s.gamma3, cap), 0.0)
    return g3.sum() * (axis[1] - axis[0]) ** 2

v0, v1 = box_volume(clean), box_volume(attacked)
print(f"region volume in the box drops by {100 * (1 - v1 / v0):.1f}%")
