"""Helpers for the two-cell reference experiment (region surfaces and SINR anchors)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .link_sim import alpha_all, sinr_asymptotic_all, sinr_closed_form_all
from .scenario import Scenario, build_attackers, design_network

__all__ = ["AnchorPoint", "anchor_point", "calibrate_bs_noise", "REFERENCE_SINR", "NOISE_GRID"]

# User (1,1) at Nt = 200: achievable SINR without / with the attack.
REFERENCE_SINR = (0.90, 0.69)
NOISE_GRID = (0.1, 0.5, 1.0)


@dataclass(frozen=True)
class AnchorPoint:
    bs_noise_var: float
    Nt: int
    sinr_off: np.ndarray
    sinr_on: np.ndarray
    sinr_inf_off: np.ndarray
    sinr_inf_on: np.ndarray
    alpha_on: np.ndarray

    def error(self, user=(0, 0), reference=REFERENCE_SINR) -> float:
        """Worse of the two absolute misses against the reference pair."""
        return max(abs(self.sinr_off[user] - reference[0]), abs(self.sinr_on[user] - reference[1]))


def anchor_point(scenario: Scenario | None = None, bs_noise_var: float = 1.0, Nt: int = 200) -> AnchorPoint:
    scenario = Scenario() if scenario is None else scenario
    res = design_network(scenario, bs_noise_var)
    off = build_attackers(scenario, False)
    on = build_attackers(scenario, True)
    return AnchorPoint(
        bs_noise_var,
        Nt,
        sinr_closed_form_all(res.book, res.config, off, res.P, Nt),
        sinr_closed_form_all(res.book, res.config, on, res.P, Nt),
        sinr_asymptotic_all(res.book, res.config, off, res.P),
        sinr_asymptotic_all(res.book, res.config, on, res.P),
        alpha_all(on, res.book),
    )


def calibrate_bs_noise(scenario: Scenario | None = None, grid=NOISE_GRID, Nt: int = 200):
    """Evaluate the anchor on each BS noise variance; return ``(best, all_points)``."""
    points = [anchor_point(scenario, sn, Nt) for sn in grid]
    best = min(points, key=lambda p: p.error())
    return best, points
