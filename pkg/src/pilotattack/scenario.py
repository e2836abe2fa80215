"""
Scenario files and the design/evaluation pipeline behind the CLI.

A scenario is one YAML (or JSON) document. Every field has a default, and
the defaults are the two-cell, four-user, length-3 setup used throughout
the package's examples. Unknown keys are rejected.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Literal, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .attack import AttackerConfig
from .channel import NetworkConfig
from .errors import DomainError, FeasibilityError
from .load_region import check_user_load
from .pilot_design import (
    PilotBook,
    allocate_power,
    canonicalize_first_pilot,
    design_pilots,
    effective_bandwidth,
    scale_to_boundary,
)
from .link_sim import delta_all

__all__ = [
    "Scenario",
    "load_scenario",
    "scenario_hash",
    "build_network",
    "build_attackers",
    "DesignResult",
    "design_network",
]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class NetworkBlock(_Strict):
    L: int = Field(2, ge=1)
    K: int = Field(4, ge=1)
    tau: int = Field(3, ge=1)
    Nt: int = Field(200, ge=1)
    same_cell_gain: float = Field(1.0, gt=0)
    cross_cell_gain: float = Field(0.95, ge=0)
    beta: Optional[List[List[List[float]]]] = None
    bs_noise_var: Union[float, List[float]] = 1.0
    user_noise_var: float = Field(1.0, ge=0)


class DesignBlock(_Strict):
    scale_to_boundary: bool = True
    oversized: Literal["raise", "split"] = "split"


class AttackerBlock(_Strict):
    enabled: bool = True
    mimicked_user: int = Field(1, ge=1)
    pilot_power: float = Field(1.0, ge=0)
    same_cell_gain: float = Field(1.0, ge=0)
    cross_cell_gain: float = Field(0.95, ge=0)
    beta: Optional[List[List[float]]] = None
    an_power: float = Field(1.0, ge=0)
    an_scaling: Literal["amplitude", "power"] = "amplitude"
    effective_bandwidth: float = Field(0.4, ge=0, lt=1)


class SweepBlock(_Strict):
    nt: List[int] = Field(default_factory=lambda: [10, 20, 50, 100, 200, 500, 1000, 10000])

    @field_validator("nt")
    @classmethod
    def _nonempty(cls, v):
        if not v or any(n < 1 for n in v):
            raise ValueError("Nt sweep must be a nonempty list of positive integers")
        return v


class RegionBlock(_Strict):
    fixed_gamma: float = Field(0.3, ge=0)
    gamma_min: float = Field(0.0, ge=0)
    gamma_max: float = Field(3.0, gt=0)
    step: float = Field(0.05, gt=0)

    def axis(self) -> np.ndarray:
        n = int(np.floor((self.gamma_max - self.gamma_min) / self.step + 1e-9)) + 1
        return self.gamma_min + self.step * np.arange(n)


class MonteCarloBlock(_Strict):
    realizations: int = Field(10000, ge=1)
    nt: List[int] = Field(default_factory=lambda: [50, 200, 1000])
    workers: int = Field(1, ge=1)


class OutputBlock(_Strict):
    path: Optional[str] = None
    format: Literal["csv", "json"] = "csv"


class Scenario(_Strict):
    network: NetworkBlock = NetworkBlock()
    targets: List[List[float]] = Field(
        default_factory=lambda: [[0.91, 0.74, 0.64, 0.23], [0.94, 0.82, 0.45, 0.10]]
    )
    design: DesignBlock = DesignBlock()
    attackers: AttackerBlock = AttackerBlock()
    experiment: Optional[Literal["design", "region", "sinr-curve", "monte-carlo"]] = None
    sweep: SweepBlock = SweepBlock()
    region: RegionBlock = RegionBlock()
    monte_carlo: MonteCarloBlock = MonteCarloBlock()
    seed: int = Field(2017, ge=0)
    output: OutputBlock = OutputBlock()

    @model_validator(mode="after")
    def _shapes(self):
        L, K = self.network.L, self.network.K
        if len(self.targets) != L or any(len(row) != K for row in self.targets):
            raise ValueError(f"targets must be an {L} x {K} nested list")
        if any(g < 0 for row in self.targets for g in row):
            raise ValueError("SINR targets must be nonnegative")
        if self.attackers.mimicked_user > K:
            raise ValueError("mimicked_user exceeds users per cell")
        return self


def load_scenario(path: str | Path | None = None, **overrides) -> Scenario:
    """Read and validate a scenario file; ``None`` gives the defaults."""
    data = {}
    if path is not None:
        text = Path(path).read_text()
        data = yaml.safe_load(text) or {}
        if not isinstance(data, dict):
            raise DomainError("scenario file must contain a mapping at top level")
    data.update({k: v for k, v in overrides.items() if v is not None})
    return Scenario.model_validate(data)


def scenario_hash(scenario: Scenario) -> str:
    text = json.dumps(scenario.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def build_network(scenario: Scenario, bs_noise_var=None) -> NetworkConfig:
    """Network configuration with power-controlled pilots (``p = 1 / beta_same_cell``)."""
    n = scenario.network
    sn = np.broadcast_to(np.asarray(n.bs_noise_var if bs_noise_var is None else bs_noise_var, float), (n.L,))
    if n.beta is None:
        beta = NetworkConfig.two_level(n.L, n.K, n.Nt, n.tau, n.same_cell_gain, n.cross_cell_gain).beta
    else:
        beta = np.asarray(n.beta, dtype=float)
        if beta.shape != (n.L, n.K, n.L):
            raise DomainError(f"network.beta must have shape ({n.L}, {n.K}, {n.L})")
    own = beta[np.arange(n.L), :, np.arange(n.L)]
    if np.any(own <= 0):
        raise DomainError("same-cell gains must be positive")
    return NetworkConfig(n.L, n.K, n.Nt, n.tau, beta, 1.0 / own, sn, n.user_noise_var)


def build_attackers(scenario: Scenario, enabled: bool | None = None) -> AttackerConfig:
    a = scenario.attackers
    L = scenario.network.L
    on = a.enabled if enabled is None else enabled
    if not on:
        return AttackerConfig.disabled(L)
    cfg = AttackerConfig.mirrored(
        L,
        same_cell_gain=a.same_cell_gain,
        cross_cell_gain=a.cross_cell_gain,
        pilot_power=a.pilot_power,
        an_power=a.an_power,
        effective_bandwidth=a.effective_bandwidth,
        mimicked_pilot=a.mimicked_user - 1,
        an_scaling=a.an_scaling,
    )
    if a.beta is not None:
        cfg = AttackerConfig(True, cfg.mimicked_pilot, cfg.pilot_power, np.asarray(a.beta, float),
                             cfg.an_power, cfg.gamma, cfg.an_scaling)
    return cfg


@dataclass(frozen=True)
class DesignResult:
    """Pilot book and powers the network would deploy.

    ``gamma_design`` are the targets the design works with (on the region
    boundary when scaling is enabled); ``gamma_target`` the requested ones.
    """

    config: NetworkConfig
    book: PilotBook
    gamma_target: np.ndarray
    gamma_design: np.ndarray
    delta: np.ndarray
    P: np.ndarray


def design_network(scenario: Scenario, bs_noise_var=None) -> DesignResult:
    """Check feasibility, design and canonicalize every cell's pilots, allocate power."""
    config = build_network(scenario, bs_noise_var)
    gamma = np.asarray(scenario.targets, dtype=float)
    tau, L = config.tau, config.L
    for l, row in enumerate(gamma):
        if not check_user_load(row, tau, L).feasible:
            raise FeasibilityError(
                f"cell {l + 1}: targets outside the user load region "
                f"(sum eb = {np.sum(effective_bandwidth(row)):.9g} > {tau / L:.9g})"
            )
    gd = scale_to_boundary(gamma, tau, L) if scenario.design.scale_to_boundary else gamma
    cells = [design_pilots(row, tau, scenario.design.oversized) for row in gd]
    book = canonicalize_first_pilot(PilotBook.stack(cells))
    d = delta_all(book, config)
    return DesignResult(config, book, gamma, gd, d, allocate_power(d, gd))
