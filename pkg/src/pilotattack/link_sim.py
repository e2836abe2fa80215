"""
Uplink training, LS channel estimation and downlink MRT.

Achievable SINR is available three ways: the closed form under the hardened
MRT precoder, its infinite-antenna limit, and a Monte-Carlo estimate of the
general use-and-forget expression driven by simulated LS estimates and the
exactly normalized precoder.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .attack import AttackerConfig, alpha_all, attacker_sequences, effective_downlink_noise_var
from .channel import NetworkConfig, ChannelRealization, generate_realization, generate_uplink_noise
from .errors import DegenerateInputError, DomainError
from .pilot_design import PilotBook

__all__ = [
    "pilot_matrix",
    "uplink_observation",
    "ls_estimate",
    "delta",
    "delta_all",
    "mrt_precoder",
    "sinr_closed_form",
    "sinr_closed_form_all",
    "sinr_asymptotic",
    "sinr_asymptotic_all",
    "monte_carlo_sinr",
    "sinr_monte_carlo",
    "MonteCarloResult",
    "SinrReport",
    "sinr_report",
    "MIN_REALIZATIONS",
]

MIN_REALIZATIONS = 100


def pilot_matrix(q, Nt: int) -> np.ndarray:
    """``q kron I_Nt``, shape (tau * Nt, Nt)."""
    q = np.asarray(q, dtype=float)
    return np.kron(q[:, None], np.eye(Nt))


def uplink_observation(
    book: PilotBook,
    config: NetworkConfig,
    attackers: AttackerConfig,
    realization: ChannelRealization,
    noise=None,
) -> np.ndarray:
    """Training signal received at every BS, shape (L, tau * Nt).

    The vector of BS l is ``sum eta Q h + sum eta_A Q_A h_A + n``; it is the
    row-major flattening of a (tau, Nt) array whose row t collects symbol t.
    """
    L, tau, Nt = config.L, config.tau, realization.Nt
    if book.tau != tau or book.sequences.shape[:2] != (L, config.K):
        raise DomainError("pilot book does not match the network configuration")
    if realization.h_user.shape != (L, config.K, L, Nt):
        raise DomainError(f"user channels have shape {realization.h_user.shape}")
    eta = np.sqrt(config.eta2)
    S = np.einsum("ijt,ijl,ijln->ltn", book.sequences, eta, realization.h_user)
    if attackers.enabled:
        qa = attacker_sequences(attackers, book)
        S = S + np.einsum("mt,ml,mln->ltn", qa, np.sqrt(attackers.eta2), realization.h_attacker)
    s = S.reshape(L, tau * Nt)
    if noise is not None:
        noise = np.asarray(noise)
        if noise.shape != s.shape:
            raise DomainError(f"noise has shape {noise.shape}, expected {s.shape}")
        s = s + noise
    return s


def ls_estimate(s_l, q) -> np.ndarray:
    """LS estimate ``Q^T s_l`` for the user holding pilot ``q``."""
    q = np.asarray(q, dtype=float)
    s_l = np.asarray(s_l)
    tau = len(q)
    if s_l.size % tau:
        raise DomainError("observation length is not a multiple of tau")
    return q @ s_l.reshape(tau, -1)


def delta_all(book: PilotBook, config: NetworkConfig) -> np.ndarray:
    """Nominal contamination-plus-noise ``delta[l, k]``, shape (L, K)."""
    rho = book.correlations
    return np.einsum("ijl,ijlk->lk", config.eta2, rho**2) + config.bs_noise_var[:, None]


def delta(l: int, k: int, book: PilotBook, config: NetworkConfig) -> float:
    return float(delta_all(book, config)[l, k])


def mrt_precoder(g_hat, delta_plus_alpha: float | None = None, Nt: int | None = None, mode: str = "exact") -> np.ndarray:
    """MRT precoder from an LS estimate.

    ``mode="exact"`` divides by ``||g_hat||``; ``mode="hardened"`` divides by
    ``sqrt(Nt * (delta + alpha))``.
    """
    g = np.asarray(g_hat)
    if mode == "exact":
        nrm = np.linalg.norm(g)
        if nrm == 0:
            raise DegenerateInputError("zero channel estimate cannot be normalized")
        return g / nrm
    if mode == "hardened":
        if delta_plus_alpha is None or delta_plus_alpha <= 0:
            raise DomainError("hardened MRT needs a positive delta + alpha")
        Nt = len(g) if Nt is None else Nt
        return g / np.sqrt(Nt * delta_plus_alpha)
    raise DomainError(f"unknown MRT mode {mode!r}")


def _prepared(book, config, attackers, powers):
    P = np.asarray(powers, dtype=float).reshape(config.L, config.K)
    D = delta_all(book, config) + alpha_all(attackers, book)
    rho2 = book.correlations**2
    # terms[l, k, m, n]: interference at user (l,k) from BS m serving user n
    terms = rho2 * (config.eta2 * config.beta)[:, :, :, None] * (P / D)[None, None]
    own = config.beta[np.arange(config.L), :, np.arange(config.L)]
    return P, D, terms, own


def sinr_closed_form_all(book, config, attackers, powers, Nt: int | None = None) -> np.ndarray:
    """Closed-form SINR for every user under the hardened MRT precoder, shape (L, K)."""
    Nt = config.Nt if Nt is None else Nt
    P, D, terms, own = _prepared(book, config, attackers, powers)
    L, K = config.L, config.K
    total = terms.sum(axis=(2, 3))
    self_term = terms.reshape(L * K, L * K)[np.arange(L * K), np.arange(L * K)].reshape(L, K)
    interference = total - self_term
    sigma_w2 = effective_downlink_noise_var(config, attackers)
    noise = (np.einsum("lkm,mn->lk", config.beta, P) + sigma_w2) / Nt
    return own * P / (D * (interference + noise))


def sinr_asymptotic_all(book, config, attackers, powers) -> np.ndarray:
    """Infinite-antenna SINR for every user; ``inf`` flags a nonpositive denominator."""
    P, D, terms, own = _prepared(book, config, attackers, powers)
    den = D * terms.sum(axis=(2, 3)) - own * P
    num = own * P
    out = np.full(num.shape, np.inf)
    ok = den > 1e-15 * np.maximum(num, 1e-300)
    out[ok] = num[ok] / den[ok]
    out[num == 0] = 0.0
    return out


def sinr_closed_form(l, k, book, config, attackers, powers, Nt: int | None = None) -> float:
    return float(sinr_closed_form_all(book, config, attackers, powers, Nt)[l, k])


def sinr_asymptotic(l, k, book, config, attackers, powers) -> float:
    return float(sinr_asymptotic_all(book, config, attackers, powers)[l, k])


@dataclass(frozen=True)
class MonteCarloResult:
    """Per-user SINR estimate with 95% confidence half-width, shapes (L, K)."""

    sinr: np.ndarray
    halfwidth: np.ndarray
    n_realizations: int


def _chunk_stats(book, config, attackers, P, seed, blocks, precoder="exact"):
    # Per-realization downlink statistics for the given block indices:
    # columns (Re s, Im s, |s|^2, sum of interference powers), shape (B, L, K, 4).
    L, K, tau, Nt = config.L, config.K, config.tau, config.Nt
    out = np.empty((len(blocks), L, K, 4))
    idx = np.arange(L)
    D = delta_all(book, config) + alpha_all(attackers, book)
    for r, b in enumerate(blocks):
        real = generate_realization(config, attackers, seed, b)
        noise = generate_uplink_noise(config, seed, b)
        s = uplink_observation(book, config, attackers, real, noise).reshape(L, tau, Nt)
        G = np.einsum("lkt,ltn->lkn", book.sequences, s)
        if precoder == "hardened":
            nrm = np.sqrt(Nt * D)[..., None]
        else:
            nrm = np.linalg.norm(G, axis=2, keepdims=True)
        if np.any(nrm == 0):
            raise DegenerateInputError(f"zero channel estimate in block {b}")
        A = G / nrm
        # x[l, k, m, n] = h_{l_k m}^H a_{m_n}
        x = np.einsum("lkmN,mnN->lkmn", real.h_user.conj(), A)
        sig = np.einsum("lklk->lk", x)
        pw = np.abs(x) ** 2 * config.beta[:, :, :, None] * P[None, None]
        interf = pw.sum(axis=(2, 3)) - (np.abs(sig) ** 2) * config.beta[idx, :, idx] * P
        out[r, ..., 0] = sig.real
        out[r, ..., 1] = sig.imag
        out[r, ..., 2] = np.abs(sig) ** 2
        out[r, ..., 3] = interf
    return out


def monte_carlo_sinr(
    book: PilotBook,
    config: NetworkConfig,
    attackers: AttackerConfig,
    powers,
    Nt: int,
    n_realizations: int,
    seed: int,
    workers: int = 1,
    chunk: int = 64,
    precoder: str = "exact",
) -> MonteCarloResult:
    """Estimate the general SINR expression by sample averages over fading.

    Each realization simulates the training signal, forms LS estimates and
    the exactly normalized MRT precoders, and records the downlink gains.
    The confidence half-width comes from the delta method on the sample
    moments. Results depend on ``(seed, n_realizations)`` only.

    ``precoder="hardened"`` swaps in the ``sqrt(Nt (delta + alpha))``
    normalization assumed by the closed form, which isolates the effect of
    normalizing by the estimate's actual norm.
    """
    if precoder not in ("exact", "hardened"):
        raise DomainError(f"unknown MRT mode {precoder!r}")
    if n_realizations < MIN_REALIZATIONS:
        raise DomainError(f"need at least {MIN_REALIZATIONS} realizations, got {n_realizations}")
    config = config.with_antennas(Nt)
    P = np.asarray(powers, dtype=float).reshape(config.L, config.K)
    chunks = [range(s, min(s + chunk, n_realizations)) for s in range(0, n_realizations, chunk)]
    job = lambda blocks: _chunk_stats(book, config, attackers, P, seed, blocks, precoder)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(job, chunks))
    else:
        parts = [job(c) for c in chunks]
    samples = np.concatenate(parts, axis=0)

    n = samples.shape[0]
    m = samples.mean(axis=0)
    m1, m2, m3, m4 = m[..., 0], m[..., 1], m[..., 2], m[..., 3]
    bP = config.beta[np.arange(config.L), :, np.arange(config.L)] * P
    sigma_w2 = effective_downlink_noise_var(config, attackers)
    num = bP * (m1**2 + m2**2)
    den = bP * (m3 - m1**2 - m2**2) + m4 + sigma_w2
    sinr = num / den

    grad = np.stack(
        [
            2 * bP * m1 * (den + num) / den**2,
            2 * bP * m2 * (den + num) / den**2,
            -num * bP / den**2,
            -num / den**2,
        ],
        axis=-1,
    )
    centered = samples - m
    cov = np.einsum("rlki,rlkj->lkij", centered, centered) / (n - 1)
    var = np.einsum("lki,lkij,lkj->lk", grad, cov, grad) / n
    return MonteCarloResult(sinr, 1.959963984540054 * np.sqrt(var), n)


def sinr_monte_carlo(l, k, book, config, attackers, powers, Nt, n_realizations, seed, workers: int = 1,
                     precoder: str = "exact"):
    """Monte-Carlo SINR of one user as ``(estimate, halfwidth)``."""
    res = monte_carlo_sinr(book, config, attackers, powers, Nt, n_realizations, seed, workers, precoder=precoder)
    return float(res.sinr[l, k]), float(res.halfwidth[l, k])


@dataclass(frozen=True)
class SinrReport:
    """SINR of every user at one antenna count, arrays of shape (L, K)."""

    Nt: int
    gamma_target: np.ndarray
    P: np.ndarray
    delta: np.ndarray
    alpha: np.ndarray
    sinr_cf: np.ndarray
    sinr_inf: np.ndarray
    sinr_mc: np.ndarray | None = None
    mc_halfwidth: np.ndarray | None = None

    @property
    def target_met_cf(self) -> np.ndarray:
        return self.sinr_cf >= self.gamma_target

    @property
    def target_met_inf(self) -> np.ndarray:
        return self.sinr_inf >= self.gamma_target

    def rows(self):
        """One dict per user, cells and users numbered from 1."""
        L, K = self.gamma_target.shape
        for l in range(L):
            for k in range(K):
                yield {
                    "cell": l + 1,
                    "user": k + 1,
                    "Nt": self.Nt,
                    "gamma_target": self.gamma_target[l, k],
                    "P": self.P[l, k],
                    "delta": self.delta[l, k],
                    "alpha": self.alpha[l, k],
                    "sinr_cf": self.sinr_cf[l, k],
                    "sinr_inf": self.sinr_inf[l, k],
                    "sinr_mc": None if self.sinr_mc is None else self.sinr_mc[l, k],
                    "mc_halfwidth": None if self.mc_halfwidth is None else self.mc_halfwidth[l, k],
                    "target_met_cf": bool(self.target_met_cf[l, k]),
                    "target_met_inf": bool(self.target_met_inf[l, k]),
                }


def sinr_report(book, config, attackers, gamma_target, powers, Nt: int, mc: MonteCarloResult | None = None) -> SinrReport:
    """Evaluate closed-form and asymptotic SINR (plus an optional Monte-Carlo run)."""
    P = np.asarray(powers, dtype=float).reshape(config.L, config.K)
    return SinrReport(
        Nt=int(Nt),
        gamma_target=np.asarray(gamma_target, dtype=float).reshape(config.L, config.K),
        P=P,
        delta=delta_all(book, config),
        alpha=alpha_all(attackers, book),
        sinr_cf=sinr_closed_form_all(book, config, attackers, P, Nt),
        sinr_inf=sinr_asymptotic_all(book, config, attackers, P),
        sinr_mc=None if mc is None else mc.sinr,
        mc_halfwidth=None if mc is None else mc.halfwidth,
    )
