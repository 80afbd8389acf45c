"""Symbol-level checks: parity, factorizations, limits, branch seam."""

import mpmath as mp
import numpy as np
import pytest

from ilwave import symbols
from ilwave.symbols import (
    SERIES_SWITCH,
    big_l,
    bo_ilw_gap,
    bo_ilw_gap_bound,
    omega,
    omega_prime,
    psi_symbol,
    q_symbol,
    t_delta_dx_symbol,
)

mp.mp.dps = 50


def mp_omega(delta, z):
    z = mp.mpf(z)
    return z * z * mp.coth(delta * z) - z / delta


def mp_omega_prime(delta, z):
    z = mp.mpf(z)
    return 2 * z * mp.coth(delta * z) - delta * z * z / mp.sinh(delta * z) ** 2 - 1 / mp.mpf(delta)


def ulps(x):
    return np.spacing(np.abs(x) + np.finfo(float).tiny)


def rand_samples(rng, count):
    deltas = 10.0 ** rng.uniform(-1.5, 1.5, count)
    zs = np.sign(rng.standard_normal(count)) * 10.0 ** rng.uniform(-3, 3, count)
    return deltas, zs


def test_omega_trivial_values():
    assert omega(1.0, 0.0) == 0.0
    assert omega(1.0, -2.0) == -omega(1.0, 2.0)
    assert omega(1.0, 1.0) > 0.0
    assert omega(1.0, -1.0) < 0.0


def test_omega_large_z_matches_high_precision():
    val = omega(1.0, 50.0)
    exact = float(mp_omega(1.0, 50.0))
    assert abs(val - exact) < 1e-10
    assert abs(val - (50.0 * 50.0 - 50.0)) < 1e-10


def test_omega_prime_at_zero_and_evenness():
    assert omega_prime(1.0, 0.0) == 0.0
    assert omega_prime(1.0, 3.0) == omega_prime(1.0, -3.0)
    assert omega_prime(1.0, 3.0) > 0.0


def test_omega_prime_matches_finite_difference():
    h = 1e-4
    fd = (omega(2.0, 1.0 + h) - omega(2.0, 1.0 - h)) / (2.0 * h)
    assert abs(omega_prime(2.0, 1.0) - fd) < 1e-6


def test_omega_prime_fd_convergence_order():
    rng = np.random.default_rng(7)
    for delta, z in [(1.0, 0.7), (3.0, 2.5), (0.2, 4.0)]:
        errs = []
        for h in (1e-2, 1e-3, 1e-4):
            fd = (omega(delta, z + h) - omega(delta, z - h)) / (2.0 * h)
            errs.append(abs(fd - omega_prime(delta, z)))
        order = np.log10(errs[0] / errs[1])
        assert order >= 1.9, (delta, z, errs)
    del rng


def test_q_symbol_defining_identity():
    assert q_symbol(1.0, 0.0) == 0.0
    for z in (0.1, 1.0, 10.0):
        q = q_symbol(1.0, z)
        op = omega_prime(1.0, z)
        assert abs(q * q - op) <= 4 * ulps(op)


def test_q_symbol_large_z():
    z = 1e4
    q = q_symbol(1.0, z)
    exact = float(mp.sqrt(mp_omega_prime(1.0, z)))
    assert abs(q - exact) < 1e-10 * exact
    assert abs(q / np.sqrt(2.0 * z) - 1.0) < 1e-3


def test_big_l_values_and_factorization():
    assert big_l(1.0, 0.0) == 0.0
    assert big_l(1.0, 5.0) == big_l(1.0, -5.0)
    for delta, z in [(1.0, 0.3), (2.0, 7.0)]:
        lhs = z * big_l(delta, z)
        rhs = omega(delta, z)
        assert abs(lhs - rhs) <= 4 * ulps(rhs)


def test_psi_symbol_basics():
    assert psi_symbol(1.0, 0.0) == 0.0
    for z in (0.1, 1.0, 10.0):
        assert psi_symbol(1.0, -z) == -psi_symbol(1.0, z)
    # high-precision oracle at z = 1e3: psi = 1/z - coth(z) = -1 + 1/z - tiny
    exact = float(1 / mp.mpf(1e3) - mp.coth(mp.mpf(1e3)))
    assert abs(psi_symbol(1.0, 1e3) - exact) < 1e-14
    assert abs(psi_symbol(1.0, 1e3) + 1.0) < 2e-3


def test_psi_symbol_bounded_and_saturating():
    rng = np.random.default_rng(3)
    deltas, zs = rand_samples(rng, 300)
    vals = np.array([psi_symbol(d, z) for d, z in zip(deltas, zs)])
    assert np.all(np.abs(vals) <= 1.0)
    assert abs(psi_symbol(2.0, 1e6) + 1.0) < 1e-6
    assert abs(psi_symbol(2.0, -1e6) - 1.0) < 1e-6


def test_psi_factorization_against_omega():
    # z**2 * psi = -omega links the bounded factor to the dispersion function
    rng = np.random.default_rng(11)
    deltas, zs = rand_samples(rng, 300)
    for d, z in zip(deltas, zs):
        lhs = z * z * psi_symbol(d, z)
        rhs = -omega(d, z)
        # both sides carry ~3e-13 relative cancellation noise near the seam
        assert abs(lhs - rhs) <= 2e-12 * abs(rhs) + 1e-300


def test_bo_ilw_gap_zero_and_bound():
    assert bo_ilw_gap(1.0, 0.0) == 0.0
    gap = bo_ilw_gap(1.0, 20.0)
    exact = float(20.0**2 - mp_omega(1.0, 20.0) - 20.0 / 1.0)
    # exact = z|z| - z^2 coth(dz): omega = z^2 coth - z/delta
    exact = float(mp.mpf(20.0) ** 2 * (1 - mp.coth(mp.mpf(20.0))))
    assert abs(gap - exact) < 1e-18
    assert abs(gap) < 16.0 * 20.0**2 * np.exp(-2.0 * 20.0)
    assert abs(gap) <= bo_ilw_gap_bound(1.0, 20.0) * (1 + 1e-12)


def test_bo_ilw_gap_monotone_in_depth():
    vals = [abs(bo_ilw_gap(d, 5.0)) for d in (1.0, 2.0, 4.0, 8.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_parity_properties_random():
    rng = np.random.default_rng(42)
    deltas, zs = rand_samples(rng, 1000)
    for d, z in zip(deltas, zs):
        assert omega(d, -z) == -omega(d, z)
        assert psi_symbol(d, -z) == -psi_symbol(d, z)
        assert omega_prime(d, -z) == omega_prime(d, z)
        assert q_symbol(d, -z) == q_symbol(d, z)
        assert big_l(d, -z) == big_l(d, z)


def test_factorizations_random():
    rng = np.random.default_rng(43)
    deltas, zs = rand_samples(rng, 1000)
    for d, z in zip(deltas, zs):
        om = omega(d, z)
        assert abs(z * big_l(d, z) - om) <= 4 * ulps(om) + 1e-300
        op = omega_prime(d, z)
        assert abs(q_symbol(d, z) ** 2 - op) <= 4 * ulps(op) + 1e-300
        assert op >= 0.0
        if z > 0:
            assert om > 0.0


def test_series_direct_seam_agreement():
    rng = np.random.default_rng(44)
    deltas = 10.0 ** rng.uniform(-2, 2, 100)
    w = SERIES_SWITCH
    for name, series, direct in [
        ("omega_prime", symbols._omega_prime_series, symbols._omega_prime_direct),
        ("big_l", symbols._big_l_series, symbols._big_l_direct),
        ("psi", symbols._psi_series, symbols._psi_direct),
    ]:
        s = series(np.array([w]))[0]
        d = direct(np.array([w]))[0]
        assert abs(s - d) <= 1e-12 * abs(d), (name, s, d)
    del deltas


def test_deep_water_limit_sup():
    z = np.linspace(-10, 10, 2001)
    sups = []
    for d in (1.0, 10.0, 100.0):
        gap = np.array(omega(d, z)) - z * np.abs(z)
        sups.append(np.max(np.abs(gap)))
    assert sups[0] > sups[1] > sups[2]


def test_shallow_water_cubic_limit():
    rng = np.random.default_rng(45)
    for _ in range(200):
        delta = 10.0 ** rng.uniform(-2, 2)
        w = rng.uniform(1e-6, 0.05 - 1e-9)
        z = w / delta
        cubic = delta * z**3 / 3.0
        assert abs(omega(delta, z) - cubic) < 1e-3 * abs(cubic)


def test_t_delta_dx_symbol_even_and_limit():
    assert abs(t_delta_dx_symbol(2.0, 0.0) + 0.5) < 1e-15
    assert t_delta_dx_symbol(2.0, 3.0) == t_delta_dx_symbol(2.0, -3.0)
    # large z: -z coth(dz) -> -|z|
    assert abs(t_delta_dx_symbol(1.0, 100.0) + 100.0) < 1e-10


def test_delta_validation():
    for bad in (0.0, -1.0, np.inf, np.nan):
        with pytest.raises(ValueError):
            omega(bad, 1.0)
