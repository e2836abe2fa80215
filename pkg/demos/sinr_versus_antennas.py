"""
SINR versus antenna count, with and without the attack
======================================================

Closed-form and infinite-antenna SINR for every user of the reference
network, then a sweep over BS noise variance at Nt = 200.
"""

import numpy as np

import pilotattack as pa
from pilotattack.reproduce import calibrate_bs_noise

scenario = pa.load_scenario()
res = pa.design_network(scenario)
states = {"off": pa.AttackerConfig.disabled(2), "on": pa.AttackerConfig.mirrored(2)}

# %%
for name, att in states.items():
    print(f"attacker {name}")
    for Nt in (10, 50, 200, 1000, 10_000):
        cf = pa.sinr_closed_form_all(res.book, res.config, att, res.P, Nt)
        print(f"  Nt={Nt:>6}: cell 1", np.round(cf[0], 3))
    print("  Nt=inf   : cell 1", np.round(pa.sinr_asymptotic_all(res.book, res.config, att, res.P)[0], 3))

# %%
# The attack contaminates the user holding e1 most; user 4 sees it only
# through its squared correlation with e1.
alpha = pa.alpha_all(states["on"], res.book)
print("alpha, cell 1:", np.round(alpha[0], 4), " ratio 4/1:", round(alpha[0, 3] / alpha[0, 0], 4))

# %%
# BS noise variance is a free parameter; see how user (1,1) moves with it.
best, points = calibrate_bs_noise(scenario)
for p in points:
    print(f"sigma_n^2={p.bs_noise_var}: off {p.sinr_off[0, 0]:.3f}  on {p.sinr_on[0, 0]:.3f}"
          f"  on, Nt=inf {p.sinr_inf_on[0, 0]:.3f}")
print("closest to (0.90, 0.69):", best.bs_noise_var, f"(miss {best.error():.3f})")
