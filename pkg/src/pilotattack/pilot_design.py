"""
User load-achieving pilot sequence design.

Pilots are real unit-norm vectors of length ``tau``. Within a cell the
sequences form a generalized Welch-bound-equality (GWBE) set: with weights
``w_k = gamma_k / (1 + gamma_k)`` (the users' effective bandwidths),

    sum_k w_k s_k s_k^T = (sum_k w_k / tau) * I_tau.

The set is obtained from a K x K Gram matrix with diagonal ``w`` and
spectrum ``(c, ..., c, 0, ..., 0)``, ``c = sum(w) / tau``, built with a
sequence of Givens rotations (constructive Schur-Horn).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, FeasibilityError, UnsupportedConfigurationError

__all__ = [
    "PilotBook",
    "effective_bandwidth",
    "gamma_from_bandwidth",
    "scale_to_boundary",
    "design_pilots",
    "gwbe_sequences",
    "canonicalize_first_pilot",
    "correlation",
    "allocate_power",
    "frame_residual",
]

_TOL = 1e-12


def effective_bandwidth(gamma):
    """Return ``gamma / (1 + gamma)``; accepts scalars or arrays."""
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0) or np.any(np.isnan(g)):
        raise DomainError(f"SINR target must be nonnegative, got {gamma!r}")
    q = g / (1.0 + g)
    return float(q) if q.ndim == 0 else q


def gamma_from_bandwidth(q):
    """Inverse of :func:`effective_bandwidth`, ``q / (1 - q)`` for q in [0, 1)."""
    q = np.asarray(q, dtype=float)
    if np.any(q < 0) or np.any(q >= 1):
        raise DomainError(f"effective bandwidth must lie in [0, 1), got {q!r}")
    g = q / (1.0 - q)
    return float(g) if g.ndim == 0 else g


def scale_to_boundary(targets, tau: int, L: int) -> np.ndarray:
    """Move per-cell SINR targets onto the upper boundary of the load region.

    Effective bandwidths are scaled by a common per-cell factor so that each
    cell sums to ``tau / L``; the result is mapped back to SINR targets.

    Parameters
    ----------
    targets : array_like, shape (L_cells, K) or (K,)
        SINR targets (linear). A 1-D input is treated as a single cell.
    tau, L : int
        Pilot length and number of cells sharing the bound ``tau / L``.

    Returns
    -------
    np.ndarray
        Scaled targets with the same shape as ``targets``.

    Raises
    ------
    FeasibilityError
        If a cell already exceeds the bound, has no positive target, or would
        need some user's effective bandwidth to reach 1.
    """
    g = np.asarray(targets, dtype=float)
    squeeze = g.ndim == 1
    g = np.atleast_2d(g)
    bound = tau / L
    q = effective_bandwidth(g)
    out = np.empty_like(g)
    for cell, qc in enumerate(q):
        total = qc.sum()
        if total > bound * (1 + _TOL):
            raise FeasibilityError(
                f"cell {cell + 1}: effective-bandwidth sum {total:.9g} exceeds tau/L = {bound:.9g}"
            )
        if total <= 0:
            raise FeasibilityError(f"cell {cell + 1}: no positive SINR target to scale")
        scaled = qc * (bound / total)
        if np.any(scaled >= 1):
            raise FeasibilityError(
                f"cell {cell + 1}: boundary scaling needs effective bandwidth "
                f"{scaled.max():.9g} >= 1 for one user"
            )
        out[cell] = scaled / (1.0 - scaled)
    return out[0] if squeeze else out


def _rotation_tangent(a: float, b: float, x: float, w: float) -> float:
    # Root t of (a - w) + 2 t x + t^2 (b - w) = 0, given (a - w)(b - w) < 0.
    disc = x * x - (a - w) * (b - w)
    root = np.sqrt(max(disc, 0.0))
    qq = -(x + (root if x >= 0 else -root))
    return (a - w) / qq


def _schur_horn(diag_target: np.ndarray, spectrum: np.ndarray):
    """Givens sweep producing R with ``R diag(spectrum) R^T`` having ``diag_target``.

    Returns the orthogonal matrix ``R`` (rows ordered like ``diag_target``).
    """
    K = len(diag_target)
    A = np.diag(spectrum.astype(float))
    R = np.eye(K)
    free = list(range(K))
    slot = np.empty(K, dtype=int)
    scale = max(float(spectrum.max()), 1.0)
    for m in np.argsort(-diag_target, kind="stable"):
        wm = diag_target[m]
        d = A.diagonal()
        hit = [i for i in free if abs(d[i] - wm) <= 1e-14 * scale]
        if hit:
            i = hit[0]
        else:
            below = [i for i in free if d[i] < wm]
            above = [i for i in free if d[i] > wm]
            if not below or not above:
                raise UnsupportedConfigurationError(
                    "prescribed diagonal is not majorized by the spectrum"
                )
            i = max(below, key=lambda n: d[n])
            j = min(above, key=lambda n: d[n])
            t = _rotation_tangent(A[i, i], A[j, j], A[i, j], wm)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            G = np.array([[c, s], [-s, c]])
            idx = [i, j]
            A[idx, :] = G @ A[idx, :]
            A[:, idx] = A[:, idx] @ G.T
            R[idx, :] = G @ R[idx, :]
            A[i, i] = wm
        free.remove(i)
        slot[m] = i
    return R[slot]


def gwbe_sequences(weights, tau: int) -> np.ndarray:
    """Unit-norm sequences satisfying the weighted frame identity.

    Requires ``len(weights) > tau`` and every weight at most
    ``sum(weights) / tau``.

    Returns
    -------
    np.ndarray, shape (K, tau)
        One sequence per row.
    """
    w = np.asarray(weights, dtype=float)
    K = len(w)
    c = w.sum() / tau
    if np.any(w > c * (1 + 1e-12)):
        raise UnsupportedConfigurationError(
            f"oversized user: weight {w.max():.9g} exceeds sum/tau = {c:.9g}"
        )
    spectrum = np.r_[np.full(tau, c), np.zeros(K - tau)]
    R = _schur_horn(w, spectrum)
    X = np.sqrt(c) * R[:, :tau]
    S = X / np.sqrt(w)[:, None]
    return S / np.linalg.norm(S, axis=1, keepdims=True)


def _split_oversized(w: np.ndarray, tau: int) -> np.ndarray:
    # Oversized users take dedicated orthogonal dimensions; the rest share the
    # remaining subspace as a GWBE set.
    K = len(w)
    order = np.argsort(-w, kind="stable")
    m = 0
    while m < tau - 1 and w[order[m]] > w[order[m:]].sum() / (tau - m) * (1 + 1e-12):
        m += 1
    S = np.zeros((K, tau))
    for r in range(m):
        S[order[r], r] = 1.0
    rest = order[m:]
    if len(rest) <= tau - m:
        S[rest, m : m + len(rest)] = np.eye(len(rest))
    else:
        S[rest, m:] = gwbe_sequences(w[rest], tau - m)
    return S


def design_pilots(targets_cell, tau: int, oversized: str = "raise") -> "PilotBook":
    """Design one cell's pilot sequences for the given SINR targets.

    Parameters
    ----------
    targets_cell : array_like, shape (K,)
        The cell's SINR targets.
    tau : int
        Pilot length.
    oversized : {"raise", "split"}
        Treatment of users whose effective bandwidth exceeds the average per
        dimension. ``"split"`` assigns them orthogonal dimensions of their own.

    Returns
    -------
    PilotBook
        A single-cell book (unit-norm rows). When ``K <= tau`` the sequences
        are orthonormal.
    """
    if tau < 1:
        raise DomainError("tau must be >= 1")
    if oversized not in ("raise", "split"):
        raise DomainError(f"unknown oversized policy {oversized!r}")
    w = np.atleast_1d(effective_bandwidth(targets_cell)).astype(float)
    K = len(w)
    if K < 1:
        raise DomainError("a cell needs at least one user")
    if K <= tau:
        return PilotBook(tau, np.eye(tau)[:K][None])

    seqs = np.zeros((K, tau))
    active = w > 0
    # zero-target users carry no downlink power; park them on the last axis
    seqs[~active, tau - 1] = 1.0
    wa = w[active]
    if len(wa) <= tau:
        seqs[active] = np.eye(tau)[: len(wa)]
    elif oversized == "split":
        seqs[active] = _split_oversized(wa, tau)
    else:
        seqs[active] = gwbe_sequences(wa, tau)
    return PilotBook(tau, seqs[None])


def frame_residual(sequences, weights) -> float:
    """Frobenius norm of ``sum_k w_k s_k s_k^T - (sum(w)/tau) I``."""
    S = np.asarray(sequences, dtype=float)
    w = np.asarray(weights, dtype=float)
    tau = S.shape[-1]
    F = (S * w[:, None]).T @ S
    return float(np.linalg.norm(F - w.sum() / tau * np.eye(tau)))


def _householder_to_e1(s: np.ndarray) -> np.ndarray:
    e1 = np.zeros_like(s)
    e1[0] = 1.0
    v = s - e1
    vv = v @ v
    if vv <= 1e-30:
        return np.eye(len(s))
    return np.eye(len(s)) - 2.0 * np.outer(v, v) / vv


def canonicalize_first_pilot(book: "PilotBook") -> "PilotBook":
    """Reflect every cell so that its first user's pilot is ``e_1``.

    One Householder reflection per cell is applied to all of that cell's
    sequences, so within-cell inner products are unchanged.
    """
    out = book.sequences.copy()
    for cell in range(out.shape[0]):
        H = _householder_to_e1(out[cell, 0])
        out[cell] = out[cell] @ H.T
        out[cell, 0] = 0.0
        out[cell, 0, 0] = 1.0
    return PilotBook(book.tau, out)


def correlation(a, b) -> float:
    """Inner product of two real pilot sequences."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DomainError(f"pilot length mismatch: {a.shape} vs {b.shape}")
    return float(a @ b)


def allocate_power(delta, gamma):
    """Downlink power ``delta * gamma / (1 + gamma)``."""
    d = np.asarray(delta, dtype=float)
    if np.any(d <= 0):
        raise DomainError(f"delta must be positive, got {delta!r}")
    P = d * effective_bandwidth(gamma)
    return float(P) if np.ndim(P) == 0 else P


@dataclass(frozen=True)
class PilotBook:
    """Pilot sequences for every user of the network.

    Attributes
    ----------
    tau : int
        Sequence length.
    sequences : np.ndarray, shape (L, K, tau)
        ``sequences[l, k]`` is the pilot of user k in cell l.
    """

    tau: int
    sequences: np.ndarray

    def __post_init__(self):
        seqs = np.asarray(self.sequences, dtype=float)
        if seqs.ndim != 3 or seqs.shape[2] != self.tau:
            raise DomainError(f"sequences must have shape (L, K, {self.tau}), got {seqs.shape}")
        norms = np.linalg.norm(seqs, axis=2)
        if not np.allclose(norms, 1.0, atol=1e-9):
            raise DomainError("pilot sequences must have unit norm")
        seqs.setflags(write=False)
        object.__setattr__(self, "sequences", seqs)

    @property
    def L(self) -> int:
        return self.sequences.shape[0]

    @property
    def K(self) -> int:
        return self.sequences.shape[1]

    @property
    def correlations(self) -> np.ndarray:
        """``rho[i, j, l, k] = q_{l_k}^T q_{i_j}``, shape (L, K, L, K)."""
        return np.einsum("ijt,lkt->ijlk", self.sequences, self.sequences)

    def cell(self, l: int) -> np.ndarray:
        return self.sequences[l]

    @classmethod
    def stack(cls, books: Sequence["PilotBook"]) -> "PilotBook":
        """Join single- or multi-cell books with a common ``tau`` into one."""
        taus = {b.tau for b in books}
        if len(taus) != 1:
            raise DomainError(f"books disagree on tau: {sorted(taus)}")
        return cls(taus.pop(), np.concatenate([b.sequences for b in books], axis=0))
