"""Kernel backend parity: compiled and pure-Python paths must agree."""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

import chirptls
from chirptls import IntegrationError
from chirptls._kernels import BACKEND
from chirptls._kernels import _python

TWO_PI = 2.0 * math.pi

# chirped-transfer style parameters, shortened
_ETA = TWO_PI * 0.027
_ARGS = dict(
    delta=TWO_PI * 6.0,
    u=1.0,
    v=0.0,
    eta=_ETA,
    omega0=TWO_PI * 5.9,
    alpha=1.5 * _ETA * _ETA,
)


def _times(n):
    from chirptls import ChirpDrive, build_grid

    d = ChirpDrive(
        omega0=_ARGS["omega0"], alpha=_ARGS["alpha"], eta=_ETA, n_periods=n
    )
    return build_grid(d).t


def _run(kernel, mode, times, r0, rel_tol=1e-10, abs_tol=1e-12):
    return kernel.propagate_segments(
        mode,
        _ARGS["delta"],
        _ARGS["u"],
        _ARGS["v"],
        _ARGS["eta"],
        _ARGS["omega0"],
        _ARGS["alpha"],
        times,
        r0,
        rel_tol,
        abs_tol,
        math.inf,
        1e-2,
        True,
    )


def test_backend_tag():
    assert BACKEND in ("native", "python")
    assert chirptls.kernel_backend() == BACKEND


def test_native_matches_python():
    native = pytest.importorskip("chirptls._kernels._native")
    times = _times(60)
    r0 = np.array([0.0, 0.0, 1.0])
    for mode in (0, 1):
        out_n, acc_n, rej_n = _run(native, mode, times, r0)
        out_p, acc_p, rej_p = _run(_python, mode, times, r0)
        assert out_n.shape == out_p.shape == (times.shape[0], 3)
        assert np.max(np.abs(out_n - out_p)) < 1e-9
        assert acc_n > 0 and acc_p > 0
        assert rej_n >= 0 and rej_p >= 0


def test_python_kernel_validation():
    r0 = np.array([0.0, 0.0, 1.0])
    with pytest.raises(ValueError, match="mode"):
        _run(_python, 7, _times(2), r0)
    with pytest.raises(ValueError, match="two nodes"):
        _run(_python, 0, np.array([0.0]), r0)
    with pytest.raises(ValueError, match="increasing"):
        _run(_python, 0, np.array([0.0, 1.0, 1.0]), r0)
    with pytest.raises(ValueError, match="positive"):
        _run(_python, 0, _times(2), r0, rel_tol=-1e-10)


def test_native_kernel_validation():
    native = pytest.importorskip("chirptls._kernels._native")
    r0 = np.array([0.0, 0.0, 1.0])
    with pytest.raises(ValueError, match="mode"):
        _run(native, 7, _times(2), r0)
    with pytest.raises(ValueError, match="increasing"):
        _run(native, 0, np.array([0.0, 1.0, 1.0]), r0)


def test_unrenormalized_drift_stays_small():
    # raw norm drift of the adaptive run, no per-node rescue
    times = _times(120)
    r0 = np.array([0.0, 0.0, 1.0])
    out, _, _ = _python.propagate_segments(
        0,
        _ARGS["delta"],
        _ARGS["u"],
        _ARGS["v"],
        _ARGS["eta"],
        _ARGS["omega0"],
        _ARGS["alpha"],
        times,
        r0,
        1e-10,
        1e-12,
        math.inf,
        1e-2,
        False,
    )
    drift = np.abs(np.linalg.norm(out, axis=1) - 1.0)
    assert float(np.max(drift)) < 1e-8


def test_underflow_message():
    times = np.array([0.0, 1.0])
    # perpendicular to the drive axis so the state actually moves
    r0 = np.array([-1.0, 0.0, 0.0])
    with pytest.raises(IntegrationError, match="underflow"):
        _python.propagate_segments(
            1,
            TWO_PI * 6.0,
            1.0,
            0.0,
            50.0,       # strong resonant drive
            TWO_PI * 6.0,
            0.0,
            times,
            r0,
            1e-10,
            1e-12,
            math.inf,
            1e6,        # declared scale pushes the floor to 1 ns
            True,
        )


def test_pure_python_env_override():
    env = dict(os.environ, CHIRPTLS_PURE_PYTHON="1")
    code = "import chirptls; print(chirptls.kernel_backend())"
    got = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert got.stdout.strip() == "python"
