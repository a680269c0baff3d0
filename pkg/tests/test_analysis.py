"""Observables, presets, and the three quantitative experiments."""

import math

import numpy as np
import pytest

from chirptls import (
    IntegratorConfig,
    TlsParams,
    bloch_siegert_scan,
    compare,
    excitation,
    fig3_preset,
    lz_probability,
    lz_sweep,
    p_x,
    run_backends,
    shalibo_preset,
)
from chirptls.analysis import COHERENT_STATE, GROUND_STATE, ComparisonReport

TWO_PI = 2.0 * math.pi


def test_p_x_examples():
    assert p_x(GROUND_STATE) == 1.0
    assert p_x([1.0, 0.0, 0.0]) == 0.0
    assert p_x(COHERENT_STATE) == 0.5
    assert excitation(GROUND_STATE) == 0.0
    # vectorized over trace-shaped arrays
    r = np.array([[-1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
    assert np.array_equal(p_x(r), [1.0, 0.5, 0.0])


def test_p_x_clips_rounding_overshoot():
    assert p_x([-1.0 - 1e-10, 0.0, 0.0]) == 1.0


def test_p_x_rejects_unphysical():
    with pytest.raises(ValueError):
        p_x([1.5, 0.0, 0.0])
    with pytest.raises(ValueError):
        p_x([1.0, 1.0])


def test_compare_self_is_zero(fig3_traces):
    report = compare(fig3_traces["exact"], fig3_traces["exact"])
    assert report.max_abs_px_error == 0.0
    assert report.mean_abs_px_error == 0.0


def test_compare_aggregates(fig3_traces):
    report = compare(fig3_traces["magnus2"], fig3_traces["exact"])
    assert report.methods == ("Magnus2", "Exact")
    assert report.px_error.shape == fig3_traces["exact"].times.shape
    assert report.max_abs_px_error >= report.mean_abs_px_error > 0.0


def test_compare_rejects_grid_mismatch(fig3, fig3_traces):
    from chirptls import ChirpDrive, build_grid, run_magnus
    from chirptls.hamiltonians import MagnusOrder

    short = ChirpDrive(
        omega0=fig3.drive.omega0,
        alpha=fig3.drive.alpha,
        eta=fig3.drive.eta,
        n_periods=10,
    )
    other = run_magnus(
        fig3.tls, short, build_grid(short), fig3.r0, MagnusOrder.FIRST
    )
    with pytest.raises(ValueError, match="grid"):
        compare(fig3_traces["exact"], other)


def test_comparison_report_validation():
    times = np.array([0.0, 1.0])
    with pytest.raises(ValueError):
        ComparisonReport(
            methods=("Exact", "RWA"),
            times=times,
            px_error=np.array([-0.1, 0.0]),
            max_abs_px_error=0.1,
            mean_abs_px_error=0.05,
        )
    with pytest.raises(ValueError):
        ComparisonReport(
            methods=("Exact", "RWA"),
            times=times,
            px_error=np.array([0.1, 0.0]),
            max_abs_px_error=0.01,
            mean_abs_px_error=0.05,
        )


def test_fig3_preset_shape(fig3, fig3_grid):
    d = fig3.drive
    assert fig3.name == "fig3"
    assert math.isclose(d.omega0, TWO_PI * 5.9, rel_tol=1e-15)
    assert math.isclose(d.eta, TWO_PI * 0.027, rel_tol=1e-15)
    assert d.alpha == 1.5 * d.eta * d.eta
    assert d.n_periods == 178
    assert np.array_equal(fig3.r0, COHERENT_STATE)
    assert fig3.backends == ("exact", "rwa", "magnus1", "magnus2")
    # ~29 ns window ending at the mirrored detuning
    assert abs(fig3_grid.t[-1] - 29.178066956391156) < 1e-9
    from chirptls import omega_at

    assert omega_at(d, float(fig3_grid.t[-1])) >= TWO_PI * 6.1


def test_shalibo_preset_shape():
    p = shalibo_preset()
    d = p.drive
    assert math.isclose(d.omega0, TWO_PI * 6.1, rel_tol=1e-15)
    assert math.isclose(d.alpha, -TWO_PI * 0.001, rel_tol=1e-15)
    assert d.n_periods == 1180
    assert np.array_equal(p.r0, GROUND_STATE)
    # |alpha| ~ 0.22 eta^2: adiabatic side of the crossing
    assert 0.2 < abs(d.alpha) / d.eta**2 < 0.24
    from chirptls import build_grid

    g = build_grid(d)
    assert abs(g.t[-1] - 200.0) < 1e-6  # 0.2 GHz sweep at 1 MHz/ns


def test_run_backends_keys(fig3, fig3_traces):
    assert set(fig3_traces) == set(fig3.backends)
    tags = {
        "exact": "Exact",
        "rwa": "RWA",
        "magnus1": "Magnus1",
        "magnus2": "Magnus2",
    }
    for name, trace in fig3_traces.items():
        assert trace.method == tags[name]
        assert trace.n_periods == fig3.drive.n_periods


def test_run_backends_rejects_unknown(fig3):
    from dataclasses import replace

    bad = replace(fig3, backends=("euler",))
    with pytest.raises(ValueError, match="euler"):
        run_backends(bad)


def test_lz_sweep_single_point():
    s = TlsParams(delta0=TWO_PI * 6.0)
    eta = 0.004 * s.delta
    alpha = 2.0 * (s.u * eta) ** 2  # fast sweep: short window
    points = lz_sweep(s, eta, alpha)
    assert len(points) == 1
    pt = points[0]
    assert pt.alpha == alpha
    assert pt.p_formula == lz_probability(s, eta, alpha)
    assert pt.abs_err == abs(pt.p_exact - pt.p_formula)
    assert pt.abs_err < 0.02


def test_lz_sweep_validation():
    s = TlsParams(delta0=TWO_PI * 6.0)
    with pytest.raises(ValueError, match="margin|window"):
        lz_sweep(s, 0.1, [0.01], margin=5.0)
    with pytest.raises(ValueError):
        lz_sweep(s, 0.0, [0.01])
    # excursion would drag the drive below half the splitting
    with pytest.raises(ValueError, match="window too narrow"):
        lz_sweep(s, 0.03 * s.delta, [0.01])
    with pytest.raises(ValueError, match="positive"):
        lz_sweep(s, 0.004 * s.delta, [-0.01])


def test_bloch_siegert_scan_validation():
    s = TlsParams(delta0=TWO_PI * 6.0)
    with pytest.raises(ValueError, match="three"):
        bloch_siegert_scan(s, 0.3, [s.delta - 0.1, s.delta + 0.1])
    with pytest.raises(ValueError, match="increasing"):
        bloch_siegert_scan(s, 0.3, [s.delta, s.delta, s.delta + 0.1])
    with pytest.raises(ValueError, match="unknown backend"):
        bloch_siegert_scan(
            s, 0.3, s.delta + np.linspace(-0.2, 0.2, 5), backends=("euler",)
        )


def test_bloch_siegert_scan_boundary_peak_rejected():
    # grid entirely above the resonance: the response only falls
    s = TlsParams(delta0=TWO_PI * 6.0)
    eta = 0.05 * s.delta
    omega0s = s.delta + eta * np.linspace(0.5, 1.5, 5)
    with pytest.raises(ValueError, match="boundary"):
        bloch_siegert_scan(
            s, eta, omega0s, n_periods=300, backends=("magnus1",)
        )


def test_bloch_siegert_peaks_cheap_backends():
    # stroboscopic backends only: no ODE work, runs in milliseconds
    s = TlsParams(delta0=TWO_PI * 6.0)
    eta = 0.05 * s.delta
    omega0s = s.delta + eta * np.linspace(-0.75, 0.75, 11)
    scan = bloch_siegert_scan(
        s, eta, omega0s, n_periods=800, backends=("magnus1", "magnus2")
    )
    assert scan.response.shape == (2, 11)
    assert set(scan.methods) == {"Magnus1", "Magnus2"}
    # first order peaks on the bare splitting...
    assert abs(scan.peaks["Magnus1"] - s.delta) < 0.05 * eta
    # ...second order on the shifted resonance
    shift = scan.peaks["Magnus2"] - s.delta
    want = 3.0 * eta * eta / (4.0 * s.delta)
    assert abs(shift - want) < 0.2 * abs(want)
