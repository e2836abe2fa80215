from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pilotattack import (
    DomainError,
    FeasibilityError,
    PilotBook,
    UnsupportedConfigurationError,
    allocate_power,
    canonicalize_first_pilot,
    correlation,
    design_pilots,
    effective_bandwidth,
    frame_residual,
    gamma_from_bandwidth,
    gwbe_sequences,
    scale_to_boundary,
)

GAMMA_1 = [0.91, 0.74, 0.64, 0.23]
GAMMA_2 = [0.94, 0.82, 0.45, 0.10]


def random_feasible_weights(rng, K, tau):
    while True:
        w = rng.uniform(0.01, 0.99, K)
        if w.max() <= w.sum() / tau:
            return w


# --- effective bandwidth -------------------------------------------------

@pytest.mark.parametrize("gamma, expected", [(0.0, 0.0), (1.0, 0.5)])
def test_effective_bandwidth_trivial(gamma, expected):
    assert effective_bandwidth(gamma) == expected


def test_effective_bandwidth_fourth_user():
    # 0.3 / 1.3 evaluated in exact rationals
    expected = float(Fraction(3, 10) / Fraction(13, 10))
    assert effective_bandwidth(0.3) == pytest.approx(expected, abs=1e-15)
    assert expected == pytest.approx(0.230769230769, abs=1e-12)


def test_effective_bandwidth_rejects_negative():
    with pytest.raises(DomainError):
        effective_bandwidth(-0.1)


@given(st.floats(0, 1e6), st.floats(0, 1e6))
def test_effective_bandwidth_monotone(a, b):
    if a < b:
        assert effective_bandwidth(a) <= effective_bandwidth(b)
    q = effective_bandwidth(a)
    assert 0 <= q < 1


@given(st.floats(0, 0.999))
def test_bandwidth_roundtrip(q):
    assert effective_bandwidth(gamma_from_bandwidth(q)) == pytest.approx(q, abs=1e-12)


# --- boundary scaling ------------------------------------------------------

def test_scale_fixed_point():
    # four users with q = 0.375 each already sum to tau/L = 1.5
    g = np.full(4, 0.6)
    np.testing.assert_allclose(scale_to_boundary(g, 3, 2), g, rtol=1e-14)


def test_scale_single_user_cannot_absorb():
    with pytest.raises(FeasibilityError):
        scale_to_boundary([0.5], 3, 2)


def test_scale_uniform_users():
    q = 0.3
    g = np.full(4, q / (1 - q))
    out = scale_to_boundary(g, 3, 2)
    np.testing.assert_allclose(out, 0.6, rtol=1e-12)
    np.testing.assert_allclose(effective_bandwidth(out), 0.375, rtol=1e-12)


def test_scale_rejects_infeasible_input():
    with pytest.raises(FeasibilityError):
        scale_to_boundary([5.0, 5.0, 5.0, 5.0], 3, 2)


def test_scale_preserves_order_and_hits_bound():
    out = scale_to_boundary([GAMMA_1, GAMMA_2], 3, 2)
    for row, orig in zip(out, [GAMMA_1, GAMMA_2]):
        assert abs(effective_bandwidth(row).sum() - 1.5) <= 1e-12
        assert list(np.argsort(row)) == list(np.argsort(orig))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0.01, 3.0), min_size=4, max_size=8))
def test_scale_sum_property(gammas):
    tau, L = 4, 1
    q = effective_bandwidth(np.array(gammas))
    if q.sum() > tau / L:
        return
    try:
        out = scale_to_boundary(gammas, tau, L)
    except FeasibilityError:
        assert (q * (tau / L) / q.sum()).max() >= 1
        return
    assert abs(effective_bandwidth(out).sum() - tau / L) <= 1e-12


# --- GWBE design -----------------------------------------------------------

def test_design_orthogonal_when_K_equals_tau():
    book = design_pilots([0.5, 0.5, 0.5], 3)
    rho = book.correlations[0, :, 0, :]
    np.testing.assert_allclose(rho, np.eye(3), atol=1e-15)


def test_design_single_user():
    book = design_pilots([0.5], 3)
    assert book.sequences.shape == (1, 1, 3)
    assert np.linalg.norm(book.sequences[0, 0]) == pytest.approx(1.0, abs=1e-15)


def test_design_reference_cell_frame_identity():
    book = design_pilots(GAMMA_1, 3)
    w = effective_bandwidth(np.array(GAMMA_1))
    S = book.sequences[0]
    assert frame_residual(S, w) <= 1e-9
    rho2 = (S @ S.T) ** 2
    np.testing.assert_allclose(rho2 @ w, w.sum() / 3, atol=1e-9)


def test_gwbe_gram_matches_rank_one_complement():
    # K = tau + 1: the Gram matrix must be c (I - u u^T) with u_k^2 = 1 - w_k / c,
    # so the squared correlations are fixed by the weights alone.
    w = effective_bandwidth(np.array(GAMMA_1))
    c = w.sum() / 3
    u2 = 1 - w / c
    S = gwbe_sequences(w, 3)
    rho2 = (S @ S.T) ** 2
    expected = c**2 * np.outer(u2, u2) / np.outer(w, w)
    off = ~np.eye(4, dtype=bool)
    np.testing.assert_allclose(rho2[off], expected[off], atol=1e-12)


def test_design_rejects_oversized_user():
    with pytest.raises(UnsupportedConfigurationError):
        design_pilots(GAMMA_2, 3, oversized="raise")


def test_design_split_handles_oversized_user():
    book = design_pilots(GAMMA_2, 3, oversized="split")
    S = book.sequences[0]
    np.testing.assert_allclose(np.linalg.norm(S, axis=1), 1.0, atol=1e-12)
    # the heaviest user gets a dimension of its own
    rho = S @ S.T
    np.testing.assert_allclose(rho[0, 1:], 0.0, atol=1e-12)
    # the remaining users still satisfy the frame identity on their subspace
    w = effective_bandwidth(np.array(GAMMA_2))
    F = (S * w[:, None]).T @ S
    assert np.linalg.eigvalsh(F).max() == pytest.approx(w[0], abs=1e-12)


def test_split_matches_plain_design_without_oversized_users():
    a = design_pilots(GAMMA_1, 3, oversized="split").sequences
    b = design_pilots(GAMMA_1, 3, oversized="raise").sequences
    np.testing.assert_allclose(a, b, atol=1e-14)


def test_equal_weight_total_squared_correlation():
    S = design_pilots([1.0] * 4, 3).sequences[0]
    rho2 = (S @ S.T) ** 2
    np.testing.assert_allclose(rho2.sum(axis=1) - 1.0, 4 / 3 - 1, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_frame_identity_property(seed):
    rng = np.random.default_rng(seed)
    K = int(rng.integers(3, 9))
    tau = int(rng.integers(2, K))
    w = random_feasible_weights(rng, K, tau)
    S = gwbe_sequences(w, tau)
    assert frame_residual(S, w) <= 1e-9
    np.testing.assert_allclose(np.linalg.norm(S, axis=1), 1.0, atol=1e-12)
    rho2 = (S @ S.T) ** 2
    np.testing.assert_allclose(rho2 @ w, w.sum() / tau, atol=1e-9)


# --- canonicalization -------------------------------------------------------

def test_canonicalize_fixed_point():
    book = PilotBook(3, np.eye(3)[None])
    out = canonicalize_first_pilot(book)
    np.testing.assert_array_equal(out.sequences, book.sequences)


def test_canonicalize_permutation():
    seqs = np.array([[[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]])
    book = PilotBook(3, seqs)
    out = canonicalize_first_pilot(book)
    np.testing.assert_array_equal(out.sequences[0, 0], [1.0, 0.0, 0.0])
    np.testing.assert_allclose(out.correlations, book.correlations, atol=1e-15)


def test_canonicalize_gwbe_keeps_frame():
    w = effective_bandwidth(np.array(GAMMA_1))
    rng = np.random.default_rng(5)
    Q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    book = PilotBook(3, (gwbe_sequences(w, 3) @ Q.T)[None])
    assert book.sequences[0, 0, 0] != 1.0
    out = canonicalize_first_pilot(book)
    np.testing.assert_array_equal(out.sequences[0, 0], [1.0, 0.0, 0.0])
    assert frame_residual(out.sequences[0], w) <= 1e-9
    assert np.abs(out.correlations - book.correlations).max() <= 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_canonicalize_preserves_inner_products(seed):
    rng = np.random.default_rng(seed)
    L, K, tau = int(rng.integers(1, 4)), int(rng.integers(1, 7)), int(rng.integers(2, 6))
    x = rng.standard_normal((L, K, tau))
    book = PilotBook(tau, x / np.linalg.norm(x, axis=2, keepdims=True))
    out = canonicalize_first_pilot(book)
    for l in range(L):
        np.testing.assert_array_equal(out.sequences[l, 0], np.eye(tau)[0])
        a = book.sequences[l] @ book.sequences[l].T
        b = out.sequences[l] @ out.sequences[l].T
        assert np.abs(a - b).max() <= 1e-12


# --- correlation and power -------------------------------------------------

def test_correlation_basics():
    e = np.eye(3)
    assert correlation(e[0], e[0]) == 1.0
    assert correlation(e[0], e[1]) == 0.0
    with pytest.raises(DomainError):
        correlation(e[0], [1.0, 0.0])


def test_correlation_symmetric():
    rng = np.random.default_rng(0)
    a, b = rng.standard_normal((2, 5))
    a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
    assert correlation(a, b) == correlation(b, a)
    assert -1.0 <= correlation(a, b) <= 1.0


def test_allocate_power_examples():
    assert allocate_power(1.0, 0.0) == 0.0
    assert allocate_power(1.2, 0.5) == pytest.approx(0.4, abs=1e-15)
    assert allocate_power(1.0, 0.91) == pytest.approx(0.91 / 1.91, abs=1e-15)
    assert allocate_power(1.0, 0.91) == pytest.approx(0.476439, abs=1e-6)
    with pytest.raises(DomainError):
        allocate_power(0.0, 0.5)


@given(st.floats(0.01, 100), st.floats(0.01, 100), st.floats(0, 100), st.floats(0, 100))
def test_allocate_power_monotone(d1, d2, g1, g2):
    lo_d, hi_d = sorted([d1, d2])
    lo_g, hi_g = sorted([g1, g2])
    assert allocate_power(lo_d, lo_g) <= allocate_power(hi_d, hi_g)


def test_pilotbook_rejects_non_unit():
    with pytest.raises(DomainError):
        PilotBook(2, np.array([[[1.0, 1.0]]]))
