"""
Network configuration and small-scale fading draws.

Every random quantity comes from a Philox stream keyed by
``(seed, block_index, entity)``, so a realization depends only on those
keys and never on how blocks are spread over workers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError

__all__ = [
    "NetworkConfig",
    "ChannelRealization",
    "substream",
    "generate_realization",
    "generate_uplink_noise",
    "channel_hardening_check",
]

USER_CHANNELS = 0
ATTACKER_CHANNELS = 1
UPLINK_NOISE = 2


@dataclass(frozen=True)
class NetworkConfig:
    """Cells, users, antennas and large-scale quantities.

    Attributes
    ----------
    L, K, Nt, tau : int
        Cells, users per cell, BS antennas, pilot length.
    beta : np.ndarray, shape (L, K, L)
        ``beta[i, j, l]``: large-scale gain from user j of cell i to BS l.
    pilot_power : np.ndarray, shape (L, K)
    bs_noise_var : np.ndarray, shape (L,)
    user_noise_var : float
        AWGN variance at every user.
    """

    L: int
    K: int
    Nt: int
    tau: int
    beta: np.ndarray
    pilot_power: np.ndarray
    bs_noise_var: np.ndarray
    user_noise_var: float = 1.0

    def __post_init__(self):
        L, K = self.L, self.K
        beta = np.asarray(self.beta, dtype=float).reshape(L, K, L)
        p = np.asarray(self.pilot_power, dtype=float).reshape(L, K)
        sn = np.broadcast_to(np.asarray(self.bs_noise_var, dtype=float), (L,)).copy()
        if self.Nt < 1 or self.tau < 1 or L < 1 or K < 0:
            raise DomainError("need L >= 1, K >= 0, Nt >= 1, tau >= 1")
        if np.any(beta < 0) or np.any(p < 0) or np.any(sn < 0) or self.user_noise_var < 0:
            raise DomainError("gains, powers and noise variances must be nonnegative")
        own = beta[np.arange(L), :, np.arange(L)]
        if not np.allclose(p * own, 1.0, rtol=1e-9):
            raise DomainError("uplink power control requires p * beta_same_cell = 1 for every user")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "pilot_power", p)
        object.__setattr__(self, "bs_noise_var", sn)

    @property
    def eta2(self) -> np.ndarray:
        """``eta2[i, j, l] = p_{i_j} * beta_{i_j l}``."""
        return self.pilot_power[:, :, None] * self.beta

    def with_antennas(self, Nt: int) -> "NetworkConfig":
        return replace(self, Nt=int(Nt))

    @classmethod
    def two_level(
        cls,
        L: int,
        K: int,
        Nt: int,
        tau: int,
        same_cell_gain: float = 1.0,
        cross_cell_gain: float = 0.95,
        bs_noise_var: float = 1.0,
        user_noise_var: float = 1.0,
    ) -> "NetworkConfig":
        """Same gain to the home BS, another to every other BS; power-controlled pilots."""
        beta = np.full((L, K, L), cross_cell_gain, dtype=float)
        for l in range(L):
            beta[l, :, l] = same_cell_gain
        p = np.full((L, K), 1.0 / same_cell_gain)
        return cls(L, K, Nt, tau, beta, p, np.full(L, bs_noise_var), user_noise_var)


@dataclass(frozen=True)
class ChannelRealization:
    """Small-scale fading for one coherence block.

    ``h_user[i, j, l]`` is the length-Nt vector from user j of cell i to BS l;
    ``h_attacker[m, l]`` the one from the attacker of cell m to BS l.
    """

    h_user: np.ndarray
    h_attacker: np.ndarray

    @property
    def Nt(self) -> int:
        return self.h_user.shape[-1]

    def vector(self, entity) -> np.ndarray:
        """Look up ``(i, j, l)`` for a user or ``("attacker", m, l)``."""
        if entity[0] == "attacker":
            return self.h_attacker[entity[1], entity[2]]
        i, j, l = entity
        return self.h_user[i, j, l]


def substream(seed: int, block_index: int, entity: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(block_index), int(entity)))
    return np.random.Generator(np.random.Philox(ss))


def _cn(rng: np.random.Generator, shape, var: float = 1.0) -> np.ndarray:
    x = rng.standard_normal(tuple(shape) + (2,))
    return np.sqrt(var / 2.0) * (x[..., 0] + 1j * x[..., 1])


def generate_realization(config: NetworkConfig, attackers, seed: int, block_index: int) -> ChannelRealization:
    """Draw i.i.d. CN(0, 1) fading for every (user, BS) and (attacker, BS) pair.

    Attacker channels are drawn from their own stream whether or not the
    attack is enabled, so toggling the attack leaves user channels unchanged.
    """
    L, K, Nt = config.L, config.K, config.Nt
    h_user = _cn(substream(seed, block_index, USER_CHANNELS), (L, K, L, Nt))
    h_att = _cn(substream(seed, block_index, ATTACKER_CHANNELS), (attackers.L, L, Nt))
    return ChannelRealization(h_user, h_att)


def generate_uplink_noise(config: NetworkConfig, seed: int, block_index: int) -> np.ndarray:
    """Training-phase AWGN at every BS, shape (L, tau * Nt)."""
    rng = substream(seed, block_index, UPLINK_NOISE)
    n = _cn(rng, (config.L, config.tau * config.Nt))
    return n * np.sqrt(config.bs_noise_var)[:, None]


def channel_hardening_check(realization: ChannelRealization, pair_a, pair_b) -> complex:
    """``h_a^H h_b / Nt``; tends to 1 for ``a == b`` and to 0 otherwise."""
    ha = realization.vector(pair_a)
    hb = realization.vector(pair_b)
    return complex(np.vdot(ha, hb) / len(ha))
