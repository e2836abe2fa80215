"""
Checking the closed form by simulation
======================================

Simulate training, LS estimation and norm-normalized MRT over many fading
draws and compare with the closed-form SINR.
"""

import numpy as np

import pilotattack as pa

res = pa.design_network(pa.load_scenario())
att = pa.AttackerConfig.mirrored(2)

for Nt in (50, 200):
    mc = pa.monte_carlo_sinr(res.book, res.config, att, res.P, Nt, n_realizations=2000, seed=1)
    cf = pa.sinr_closed_form_all(res.book, res.config, att, res.P, Nt)
    print(f"Nt={Nt}")
    print("  closed form:", np.round(cf.ravel(), 3))
    print("  simulated  :", np.round(mc.sinr.ravel(), 3))
    print("  95% hw     :", np.round(mc.halfwidth.ravel(), 3))

# %%
# With interference present, treating ||g_hat||^2 as Nt (delta + alpha)
# costs little. A lone user has no interference, and there the normalization
# is most of the story.
book = pa.PilotBook(3, np.eye(3)[:1][None])
cfg = pa.NetworkConfig.two_level(1, 1, 200, 3)
P = pa.allocate_power(pa.delta_all(book, cfg), np.array([[1.0]]))
off = pa.AttackerConfig.disabled(1)
for mode in ("hardened", "exact"):
    est, hw = pa.sinr_monte_carlo(0, 0, book, cfg, off, P, 200, 5000, seed=1, precoder=mode)
    print(f"lone user, {mode:>8} MRT: {est:.2f} +- {hw:.2f}")
print("closed form:", pa.sinr_closed_form(0, 0, book, cfg, off, P, 200))
