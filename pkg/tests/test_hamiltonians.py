"""Hamiltonian builders: frames, effective fields, second-order terms."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from chirptls import (
    ChirpDrive,
    MagnusOrder,
    TlsParams,
    build_grid,
    detuning_at,
    eigenframe_h,
    h_eff,
    lab_h,
    rotating_h,
    rwa_h,
)
from chirptls.hamiltonians import second_order_chirp, second_order_harmonic

TWO_PI = 2.0 * math.pi


def test_lab_h():
    s = TlsParams(delta0=3.0, epsilon0=0.5)
    d = ChirpDrive(omega0=2.8, alpha=0.0, eta=0.2, n_periods=1)
    h = lab_h(s, d, 0.0).h
    assert np.array_equal(h, [3.0, 0.0, 0.5])  # sin(0) = 0
    # quarter period of the harmonic drive: sin = 1, z picks up 2*eta
    t_quarter = 0.25 * TWO_PI / d.omega0
    h = lab_h(s, d, t_quarter).h
    assert abs(h[2] - (0.5 + 0.4)) < 1e-12
    # eta = 0 freezes the lab Hamiltonian
    d0 = ChirpDrive(omega0=2.8, alpha=0.1, eta=0.0, n_periods=1)
    assert np.array_equal(lab_h(s, d0, 13.7).h, [3.0, 0.0, 0.5])


def test_eigenframe_h():
    s = TlsParams(delta0=3.0, epsilon0=4.0)
    d = ChirpDrive(omega0=4.9, alpha=0.0, eta=0.2, n_periods=1)
    h = eigenframe_h(s, d, 0.0).h
    assert np.array_equal(h, [5.0, 0.0, 0.0])  # splitting on x at t = 0
    t_quarter = 0.25 * TWO_PI / d.omega0
    h = eigenframe_h(s, d, t_quarter).h
    assert abs(h[0] - (5.0 + 2.0 * s.v * 0.2)) < 1e-12
    assert abs(h[2] - 2.0 * s.u * 0.2) < 1e-12


def test_eigenframe_matches_lab_spectrum():
    # the basis change preserves |h| at every instant, bias included
    s = TlsParams(delta0=3.0, epsilon0=4.0)
    d = ChirpDrive(omega0=4.7, alpha=0.02, eta=0.3, n_periods=1)
    rng = np.random.default_rng(6)
    for t in rng.uniform(0.0, 30.0, size=50):
        n_lab = np.linalg.norm(lab_h(s, d, float(t)).h)
        n_eig = np.linalg.norm(eigenframe_h(s, d, float(t)).h)
        assert abs(n_lab - n_eig) < 1e-12 * n_lab


def test_rotating_h_zero_drive():
    s = TlsParams(delta0=TWO_PI * 6.0)
    d = ChirpDrive(omega0=TWO_PI * 5.9, alpha=0.05, eta=0.0, n_periods=1)
    for t in (0.0, 1.3, 7.7):
        h = rotating_h(s, d, t).h
        assert h[0] == detuning_at(s, d, t)
        assert h[1] == 0.0 and h[2] == 0.0


def test_rotating_h_vanishes_at_period_points():
    # counter-rotating terms cancel where the phase completes full turns
    s = TlsParams(delta0=TWO_PI * 6.0)
    eta = TWO_PI * 0.027
    d = ChirpDrive(omega0=TWO_PI * 5.9, alpha=1.5 * eta * eta, eta=eta, n_periods=150)
    g = build_grid(d)
    for j in range(g.n + 1):
        h = rotating_h(s, d, float(g.t[j])).h
        assert abs(h[0] - detuning_at(s, d, float(g.t[j]))) < 1e-12
        assert abs(h[1]) < 1e-12
        assert abs(h[2]) < 1e-12


def test_rotating_h_period_average_is_rwa():
    # harmonic drive: averaging the full rotating-frame field over one
    # period leaves exactly the RWA field
    s = TlsParams(delta0=TWO_PI * 6.0, epsilon0=TWO_PI * 1.1)
    d = ChirpDrive(omega0=TWO_PI * 5.8, alpha=0.0, eta=0.31, n_periods=1)
    period = TWO_PI / d.omega0
    mean = np.array(
        [
            quad(lambda t, i=i: rotating_h(s, d, t).h[i], 0.0, period,
                 epsabs=1e-12, epsrel=1e-12, limit=200)[0] / period
            for i in range(3)
        ]
    )
    want = rwa_h(s, d, 0.4 * period).h  # detuning constant at alpha = 0
    assert np.max(np.abs(mean - want)) < 1e-9


def test_rwa_h():
    s = TlsParams(delta0=TWO_PI * 6.0)
    d = ChirpDrive(omega0=TWO_PI * 5.9, alpha=0.01, eta=0.2, n_periods=1)
    h = rwa_h(s, d, 2.0).h
    assert h[0] == s.delta - d.omega0 - 2.0 * d.alpha * 2.0
    assert h[1] == s.u * d.eta
    assert h[2] == 0.0


def test_second_order_harmonic_values():
    got = second_order_harmonic(1.0, 0.0, 0.1, 5.0, 0.3)
    assert math.isclose(got[0], 0.0015, rel_tol=1e-14)  # 3 eta^2/(4 w)
    assert math.isclose(got[1], -0.003, rel_tol=1e-14)
    assert got[2] == 0.0  # needs a bias (v != 0)
    got = second_order_harmonic(0.8, 0.6, 0.1, 5.0, 0.0)
    assert got[1] == 0.0
    assert math.isclose(got[2], -2.0 * 0.01 * 0.48 / 5.0, rel_tol=1e-14)


def test_second_order_chirp_values():
    got = second_order_chirp(0.8, 0.6, 0.1, 0.02, 5.0)
    assert math.isclose(got[0], 4.0 * 0.02 * 0.6 * 0.1 / 25.0, rel_tol=1e-14)
    assert got[1] == 0.0
    assert math.isclose(
        got[2], (3.0 - 4.0 * math.pi**2) / 6.0 * 0.02 * 0.8 * 0.1 / 25.0,
        rel_tol=1e-14,
    )
    assert np.array_equal(second_order_chirp(0.8, 0.6, 0.1, 0.0, 5.0), np.zeros(3))


def test_second_order_chirp_linear_in_alpha():
    rng = np.random.default_rng(44)
    for _ in range(200):
        u = float(rng.uniform(-1.0, 1.0))
        v = math.sqrt(1.0 - u * u)
        eta, w = float(rng.uniform(0.01, 1.0)), float(rng.uniform(1.0, 50.0))
        alpha = float(rng.uniform(-0.2, 0.2))
        a = second_order_chirp(u, v, eta, 2.0 * alpha, w)
        b = 2.0 * second_order_chirp(u, v, eta, alpha, w)
        assert np.array_equal(a, b)  # doubling is exact in floats


def test_h_eff_first_order_is_period_mean():
    # x component equals the time average of the swept detuning; checked
    # against independent quadrature
    s = TlsParams(delta0=TWO_PI * 6.0)
    eta = TWO_PI * 0.027
    d = ChirpDrive(omega0=TWO_PI * 5.9, alpha=1.5 * eta * eta, eta=eta, n_periods=60)
    g = build_grid(d)
    for j in (1, 2, 30, 60):
        eff = h_eff(s, d, g, j, MagnusOrder.FIRST)
        t0, t1 = float(g.t[j - 1]), float(g.t[j])
        mean_delta = quad(
            lambda t: detuning_at(s, d, t), t0, t1, epsabs=1e-13, epsrel=1e-13
        )[0] / (t1 - t0)
        assert abs(eff.pv.h[0] - mean_delta) < 1e-10
        assert eff.pv.h[1] == s.u * d.eta
        assert eff.pv.h[2] == 0.0
        assert eff.tau == t1 - t0
        # energy and axis recompose the field
        assert np.max(np.abs(eff.energy * eff.axis - eff.pv.h)) < 1e-14


def test_h_eff_harmonic_all_periods_identical():
    s = TlsParams(delta0=TWO_PI * 6.0)
    d = ChirpDrive(omega0=TWO_PI * 5.95, alpha=0.0, eta=0.2, n_periods=30)
    g = build_grid(d)
    first = h_eff(s, d, g, 1, MagnusOrder.FIRST)
    for j in range(2, g.n + 1):
        eff = h_eff(s, d, g, j, MagnusOrder.FIRST)
        assert np.max(np.abs(eff.pv.h - first.pv.h)) < 1e-13
        assert abs(eff.tau - first.tau) < 1e-12


def test_h_eff_matches_per_period_rotation():
    # oracle for every second-order component at once: the effective field
    # must reproduce the matrix log of the exact one-period rotation of the
    # full rotating-frame flow, bias and chirp included
    from scipy.integrate import solve_ivp
    from scipy.linalg import logm

    s = TlsParams(delta0=TWO_PI * 5.8, epsilon0=TWO_PI * 1.5)
    d = ChirpDrive(omega0=s.delta - 0.3, alpha=2.0, eta=0.4, n_periods=3)
    g = build_grid(d)
    j = 2
    t0, t1 = float(g.t[j - 1]), float(g.t[j])

    def rhs(t, y):
        hx, hy, hz = rotating_h(s, d, t).h
        k = np.array([[0.0, -hz, hy], [hz, 0.0, -hx], [-hy, hx, 0.0]])
        return (k @ y.reshape(3, 3)).ravel()

    sol = solve_ivp(
        rhs, (t0, t1), np.eye(3).ravel(), rtol=1e-12, atol=1e-14,
        method="DOP853",
    )
    log = logm(sol.y[:, -1].reshape(3, 3))
    exact = np.array([log[2, 1], log[0, 2], log[1, 0]]) / (t1 - t0)

    err1 = np.max(np.abs(exact - h_eff(s, d, g, j, MagnusOrder.FIRST).pv.h))
    err2 = np.max(
        np.abs(exact - h_eff(s, d, g, j, MagnusOrder.FIRST_PLUS_SECOND).pv.h)
    )
    # measured 5.2e-3 and 8.5e-5; the second-order terms are ~4e-3 each, so
    # a wrong sign on any component would blow past the bound
    assert err1 > 3e-3
    assert err2 < 3e-4


def test_h_eff_second_order_resonance_shift():
    # symmetric TLS, harmonic drive: the only second-order x term is the
    # resonance shift 3*(u*eta)^2/(4*omega0)
    s = TlsParams(delta0=TWO_PI * 6.0)
    d = ChirpDrive(omega0=TWO_PI * 6.0, alpha=0.0, eta=0.25, n_periods=4)
    g = build_grid(d)
    h1 = h_eff(s, d, g, 2, MagnusOrder.FIRST).pv.h
    h2 = h_eff(s, d, g, 2, MagnusOrder.FIRST_PLUS_SECOND).pv.h
    shift = h2 - h1
    want_x = 3.0 * (s.u * d.eta) ** 2 / (4.0 * d.omega0)
    assert math.isclose(shift[0], want_x, rel_tol=1e-12)
    assert shift[2] == 0.0  # no bias, no chirp


def test_h_eff_second_order_is_small_correction():
    # weak drive on resonance: relative size of the correction ~ eta/omega0
    s = TlsParams(delta0=TWO_PI * 6.0)
    eta = 1e-3 * s.delta
    d = ChirpDrive(omega0=s.delta, alpha=0.0, eta=eta, n_periods=2)
    g = build_grid(d)
    e1 = h_eff(s, d, g, 1, MagnusOrder.FIRST)
    e2 = h_eff(s, d, g, 1, MagnusOrder.FIRST_PLUS_SECOND)
    ratio = np.linalg.norm(e2.pv.h - e1.pv.h) / np.linalg.norm(e1.pv.h)
    assert ratio < 2e-3


def test_h_eff_index_errors():
    s = TlsParams(delta0=TWO_PI * 6.0)
    d = ChirpDrive(omega0=TWO_PI * 5.9, alpha=0.0, eta=0.1, n_periods=5)
    g = build_grid(d)
    for j in (0, 6, -1):
        with pytest.raises(IndexError):
            h_eff(s, d, g, j, MagnusOrder.FIRST)
