"""
Designing pilots for the two-cell network
=========================================

Each cell has four users but only three pilot symbols, so the pilots cannot
be orthogonal. The design spreads the unavoidable correlation according to
each user's SINR target.
"""

import numpy as np

import pilotattack as pa

tau, L = 3, 2
targets = np.array([[0.91, 0.74, 0.64, 0.23], [0.94, 0.82, 0.45, 0.10]])

# %%
# Each target costs effective bandwidth g/(1+g); a cell may spend tau/L.
for l, row in enumerate(targets):
    chk = pa.check_user_load(row, tau, L)
    print(f"cell {l + 1}: eb used {chk.users_eb:.6f} of {chk.bound}, slack {chk.slack:.6f}")

# %%
# Push the targets out to the boundary so the whole budget is used.
scaled = pa.scale_to_boundary(targets, tau, L)
print(np.round(scaled, 4))

# %%
# Cell 1 has no oversized user and gets a plain weighted Welch-bound set.
# In cell 2 the first user wants more than one dimension's worth of the
# budget, so it is given an axis of its own.
cells = [pa.design_pilots(g, tau, oversized="split") for g in scaled]
book = pa.canonicalize_first_pilot(pa.PilotBook.stack(cells))
for l in range(L):
    print(f"cell {l + 1} pilots:\n{np.round(book.sequences[l], 4)}")

# %%
# The frame identity: sum_k w_k s_k s_k^T = (sum w / tau) I.
w = pa.effective_bandwidth(scaled[0])
print("frame residual, cell 1:", pa.frame_residual(book.sequences[0], w))

# %%
# The first pilot in every cell is e1, which is what an attacker replays.
rho2 = book.correlations[0, 0, 0] ** 2
print("rho^2 of user 1 with the others in cell 1:", np.round(rho2, 4))
