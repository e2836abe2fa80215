"""Per-cell user load region with and without an active attacker."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pilot_design import effective_bandwidth

__all__ = [
    "LoadRegionBound",
    "check_user_load",
    "check_user_load_with_attacker",
    "RegionSurface",
    "region_surface",
    "boundary_bandwidth",
]


@dataclass(frozen=True)
class LoadRegionBound:
    """Outcome of a per-cell load check.

    ``slack = bound - attacker_eb - users_eb``; the targets are feasible when
    the slack is nonnegative.
    """

    bound: float
    attacker_eb: float
    users_eb: float

    @property
    def slack(self) -> float:
        return self.bound - self.attacker_eb - self.users_eb

    @property
    def feasible(self) -> bool:
        return self.slack >= 0


def check_user_load(targets_cell, tau: int, L: int) -> LoadRegionBound:
    """Check one cell's targets against ``sum_k gamma_k/(1+gamma_k) <= tau/L``."""
    return check_user_load_with_attacker(targets_cell, 0.0, tau, L)


def check_user_load_with_attacker(targets_cell, attacker_gamma: float, tau: int, L: int) -> LoadRegionBound:
    """Load check where the cell also hosts an attacker of SINR-equivalent ``attacker_gamma``."""
    q = np.atleast_1d(effective_bandwidth(np.asarray(targets_cell, dtype=float)))
    return LoadRegionBound(
        bound=tau / L,
        attacker_eb=float(effective_bandwidth(attacker_gamma)),
        users_eb=float(np.sum(q)),
    )


def boundary_bandwidth(tau: int, L: int, fixed_gamma: float, attacker_eb: float = 0.0) -> float:
    """Effective bandwidth left for the three free users on the boundary."""
    return tau / L - effective_bandwidth(fixed_gamma) - attacker_eb


@dataclass(frozen=True)
class RegionSurface:
    """Upper boundary of the load region over a (gamma1, gamma2) grid.

    ``gamma3`` is the largest third-user target still inside the region
    (``inf`` when every target is admissible); ``inside`` is False where no
    nonnegative third target fits.
    """

    gamma1: np.ndarray
    gamma2: np.ndarray
    gamma3: np.ndarray
    inside: np.ndarray
    eb_boundary: float

    def rows(self):
        g1, g2 = np.meshgrid(self.gamma1, self.gamma2, indexing="ij")
        for a, b, c, f in zip(g1.ravel(), g2.ravel(), self.gamma3.ravel(), self.inside.ravel()):
            yield float(a), float(b), float(c), bool(f)


def region_surface(
    fixed_user_gamma: float,
    attacker_eb: float,
    gamma1_axis,
    gamma2_axis,
    tau: int = 3,
    L: int = 2,
) -> RegionSurface:
    """Solve the boundary for the third free user on a grid of the other two.

    The cell has four users, one with a fixed target. At each grid point the
    boundary value solves ``eb(g1) + eb(g2) + eb(g3) + eb(fixed) + attacker_eb = tau/L``.
    """
    g1 = np.asarray(gamma1_axis, dtype=float)
    g2 = np.asarray(gamma2_axis, dtype=float)
    budget = boundary_bandwidth(tau, L, fixed_user_gamma, attacker_eb)
    q1 = effective_bandwidth(g1)[:, None]
    q2 = effective_bandwidth(g2)[None, :]
    q3 = budget - q1 - q2
    inside = q3 >= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        g3 = np.where(q3 >= 1, np.inf, q3 / (1.0 - q3))
    g3 = np.where(inside, g3, np.nan)
    return RegionSurface(g1, g2, g3, inside, budget)
