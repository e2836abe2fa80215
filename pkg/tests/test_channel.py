import numpy as np
import pytest

from pilotattack import (
    AttackerConfig,
    DomainError,
    NetworkConfig,
    channel_hardening_check,
    generate_realization,
    generate_uplink_noise,
)


def config(L=1, K=2, Nt=8, tau=3, **kw):
    return NetworkConfig.two_level(L, K, Nt, tau, **kw)


def test_same_keys_give_identical_realization():
    cfg = config(L=2, K=4, Nt=16)
    att = AttackerConfig.mirrored(2)
    a = generate_realization(cfg, att, 7, 3)
    b = generate_realization(cfg, att, 7, 3)
    np.testing.assert_array_equal(a.h_user, b.h_user)
    np.testing.assert_array_equal(a.h_attacker, b.h_attacker)


def test_different_blocks_differ():
    cfg = config()
    att = AttackerConfig.disabled(1)
    a = generate_realization(cfg, att, 7, 0)
    b = generate_realization(cfg, att, 7, 1)
    assert not np.array_equal(a.h_user, b.h_user)


def test_user_channels_unaffected_by_attack_toggle():
    cfg = config(L=2, K=4, Nt=16)
    a = generate_realization(cfg, AttackerConfig.mirrored(2), 11, 5)
    b = generate_realization(cfg, AttackerConfig.disabled(2), 11, 5)
    np.testing.assert_array_equal(a.h_user, b.h_user)


def test_entry_moments():
    r = generate_realization(config(Nt=100_000), AttackerConfig.disabled(1), 2017, 0)
    h = r.h_user[0, :, 0]
    var = np.mean(np.abs(h) ** 2, axis=1)
    assert np.all((0.99 <= var) & (var <= 1.01))
    assert abs(np.mean(h[0])) < 0.01
    # independence of two users' entries
    assert abs(np.mean(h[0] * h[1].conj())) < 0.02
    # circular symmetry: E[h^2] = 0
    assert abs(np.mean(h[0] ** 2)) < 0.02


def test_hardening_large_array():
    r = generate_realization(config(Nt=100_000), AttackerConfig.disabled(1), 1, 0)
    assert abs(channel_hardening_check(r, (0, 0, 0), (0, 0, 0)) - 1) < 0.02
    assert abs(channel_hardening_check(r, (0, 0, 0), (0, 1, 0))) < 0.02


def test_hardening_single_antenna():
    r = generate_realization(config(Nt=1), AttackerConfig.mirrored(1), 1, 0)
    h = r.h_user[0, 0, 0, 0]
    assert channel_hardening_check(r, (0, 0, 0), (0, 0, 0)) == pytest.approx(abs(h) ** 2, rel=1e-15)
    ha = r.vector(("attacker", 0, 0))
    assert ha.shape == (1,)


def test_hardening_variance_scales_inversely_with_antennas():
    nts = [100, 1000, 10_000]
    variances = []
    for Nt in nts:
        cfg = config(K=1, Nt=Nt)
        vals = [
            channel_hardening_check(generate_realization(cfg, AttackerConfig.disabled(1), 3, b), (0, 0, 0), (0, 0, 0)).real
            for b in range(400)
        ]
        variances.append(np.var(vals, ddof=1))
    slope = np.polyfit(np.log(nts), np.log(variances), 1)[0]
    assert -1.15 <= slope <= -0.85


def test_uplink_noise_variance_follows_config():
    cfg = NetworkConfig.two_level(2, 1, 20_000, 3, bs_noise_var=0.25)
    n = generate_uplink_noise(cfg, 5, 0)
    assert n.shape == (2, 60_000)
    np.testing.assert_allclose(np.mean(np.abs(n) ** 2, axis=1), 0.25, rtol=0.03)
    np.testing.assert_array_equal(n, generate_uplink_noise(cfg, 5, 0))


def test_power_control_enforced():
    beta = np.ones((1, 2, 1))
    with pytest.raises(DomainError):
        NetworkConfig(1, 2, 4, 3, beta, [[1.0, 2.0]], [1.0])


def test_negative_gain_rejected():
    with pytest.raises(DomainError):
        NetworkConfig(1, 1, 4, 3, [[[-1.0]]], [[-1.0]], [1.0])


def test_eta2_two_level():
    cfg = NetworkConfig.two_level(2, 3, 10, 3, same_cell_gain=2.0, cross_cell_gain=0.5)
    np.testing.assert_allclose(cfg.eta2[0, :, 0], 1.0)
    np.testing.assert_allclose(cfg.eta2[0, :, 1], 0.25)
    assert cfg.with_antennas(99).Nt == 99
