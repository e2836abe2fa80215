"""
Active attacker model.

One attacker per cell replays a known pilot during uplink training (by
default the sequence fixed to ``e_1`` by the design) and transmits artificial
noise (AN) during the downlink.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import NetworkConfig
from .errors import DomainError
from .pilot_design import PilotBook

__all__ = ["AttackerConfig", "attacker_sequences", "alpha", "alpha_all", "effective_downlink_noise_var"]


@dataclass(frozen=True)
class AttackerConfig:
    """Per-cell attacker settings; arrays are indexed by the attacker's cell.

    Attributes
    ----------
    enabled : bool
    mimicked_pilot : np.ndarray of int, shape (L,)
        Index of the same-cell user whose pilot the attacker replays.
    pilot_power : np.ndarray, shape (L,)
        Uplink pilot power ``p_{m_A}``.
    beta : np.ndarray, shape (L, L)
        ``beta[m, l]`` is the large-scale gain from attacker m to BS l.
    an_power : np.ndarray, shape (L,)
        Downlink artificial-noise parameter ``P_{m_A}``.
    gamma : np.ndarray, shape (L,)
        SINR-equivalent load of each attacker used for load-region checks.
    an_scaling : {"amplitude", "power"}
        ``"amplitude"`` adds ``P_{m_A}**2`` per attacker to the user noise
        variance; ``"power"`` adds ``P_{m_A}``.
    """

    enabled: bool
    mimicked_pilot: np.ndarray
    pilot_power: np.ndarray
    beta: np.ndarray
    an_power: np.ndarray
    gamma: np.ndarray = field(default=None)
    an_scaling: str = "amplitude"

    def __post_init__(self):
        L = len(np.atleast_1d(self.pilot_power))
        conv = {
            "mimicked_pilot": np.asarray(self.mimicked_pilot, dtype=int).reshape(L),
            "pilot_power": np.asarray(self.pilot_power, dtype=float).reshape(L),
            "beta": np.asarray(self.beta, dtype=float).reshape(L, L),
            "an_power": np.asarray(self.an_power, dtype=float).reshape(L),
            "gamma": np.zeros(L) if self.gamma is None else np.asarray(self.gamma, dtype=float).reshape(L),
        }
        for name, arr in conv.items():
            if name != "mimicked_pilot" and np.any(arr < 0):
                raise DomainError(f"attacker {name} must be nonnegative")
            object.__setattr__(self, name, arr)
        if self.an_scaling not in ("amplitude", "power"):
            raise DomainError(f"an_scaling must be 'amplitude' or 'power', got {self.an_scaling!r}")

    @property
    def L(self) -> int:
        return len(self.pilot_power)

    @property
    def eta2(self) -> np.ndarray:
        """``eta2[m, l] = p_{m_A} * beta_{m_A l}``, zero when disabled."""
        if not self.enabled:
            return np.zeros((self.L, self.L))
        return self.pilot_power[:, None] * self.beta

    @classmethod
    def disabled(cls, L: int) -> "AttackerConfig":
        return cls(False, np.zeros(L, int), np.zeros(L), np.zeros((L, L)), np.zeros(L))

    @classmethod
    def mirrored(
        cls,
        L: int,
        same_cell_gain: float = 1.0,
        cross_cell_gain: float = 0.95,
        pilot_power: float = 1.0,
        an_power: float = 1.0,
        effective_bandwidth: float = 0.4,
        mimicked_pilot: int = 0,
        an_scaling: str = "amplitude",
    ) -> "AttackerConfig":
        """Attackers with the same path gains as the legitimate users."""
        beta = np.full((L, L), cross_cell_gain)
        np.fill_diagonal(beta, same_cell_gain)
        eb = effective_bandwidth
        return cls(
            True,
            np.full(L, mimicked_pilot),
            np.full(L, pilot_power),
            beta,
            np.full(L, an_power),
            np.full(L, eb / (1 - eb)),
            an_scaling,
        )


def attacker_sequences(attackers: AttackerConfig, book: PilotBook) -> np.ndarray:
    """Pilot replayed by each attacker, shape (L, tau)."""
    return book.sequences[np.arange(book.L), attackers.mimicked_pilot]


def alpha_all(attackers: AttackerConfig, book: PilotBook) -> np.ndarray:
    """Attacker contamination ``alpha[l, k] = sum_m eta2[m, l] rho_{m_A, l_k}^2``."""
    if not attackers.enabled:
        return np.zeros((book.L, book.K))
    rho_a = np.einsum("mt,lkt->mlk", attacker_sequences(attackers, book), book.sequences)
    return np.einsum("ml,mlk->lk", attackers.eta2, rho_a**2)


def alpha(l: int, k: int, attackers: AttackerConfig, book: PilotBook) -> float:
    return float(alpha_all(attackers, book)[l, k])


def effective_downlink_noise_var(config: NetworkConfig, attackers: AttackerConfig):
    """Noise variance seen by a user once the attackers' AN is added."""
    user_noise_var = config.user_noise_var
    if not attackers.enabled:
        return user_noise_var
    P = attackers.an_power
    extra = np.sum(P**2) if attackers.an_scaling == "amplitude" else np.sum(P)
    return user_noise_var + extra
