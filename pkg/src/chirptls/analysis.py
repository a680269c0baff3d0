"""Observables, trace comparison, and preset experiments.

Internally every frequency is an angular rate (rad/ns); the presets
construct their parameters from GHz values as 2*pi*f.  Three experiments
are provided: the chirped-transfer reproduction run, the Landau-Zener
sweep validating the closed-form probability, and the harmonic resonance
scan that resolves the drive-induced shift of the resonance peak.
"""

import math
from dataclasses import dataclass

import numpy as np

from .chirp import ChirpDrive, PeriodGrid, TlsParams, build_grid
from .hamiltonians import MagnusOrder
from .integrate import IntegratorConfig
from . import _kernels
from .propagators import (
    METHODS,
    StroboscopicTrace,
    lz_probability,
    run_exact,
    run_magnus,
    run_rwa,
)

__all__ = [
    "BACKEND_TAGS",
    "ComparisonReport",
    "ExperimentPreset",
    "LzPoint",
    "ResonanceScan",
    "bloch_siegert_scan",
    "compare",
    "excitation",
    "fig3_preset",
    "lz_sweep",
    "p_x",
    "run_backends",
    "shalibo_preset",
]

# CLI-facing backend names -> trace method tags
BACKEND_TAGS = {
    "exact": "Exact",
    "rwa": "RWA",
    "magnus1": "Magnus1",
    "magnus2": "Magnus2",
}

GROUND_STATE = np.array([-1.0, 0.0, 0.0])
COHERENT_STATE = np.array([0.0, 0.0, 1.0])

_BLOCH_TOL = 1e-9


def p_x(r):
    """Observable P_x = (1 - r_x)/2, vectorized over leading axes.

    Equals 1 on the r_x = -1 ground state and 1/2 on the coherent state
    r = (0,0,1).  Requires physical input, |r| <= 1.
    """
    r = np.asarray(r, dtype=float)
    if r.ndim == 0 or r.shape[-1] != 3:
        raise ValueError("expected Bloch vectors with three components")
    norms = np.linalg.norm(r, axis=-1)
    if np.any(norms > 1.0 + _BLOCH_TOL):
        raise ValueError(f"unphysical Bloch vector, |r| = {float(np.max(norms))!r}")
    value = 0.5 * (1.0 - r[..., 0])
    value = np.clip(value, 0.0, 1.0)
    return float(value) if value.ndim == 0 else value


def excitation(r):
    """Population driven out of the r_x = -1 ground state: 1 - p_x."""
    r = np.asarray(r, dtype=float)
    return 1.0 - p_x(r)


@dataclass(frozen=True)
class ComparisonReport:
    """Pointwise P_x discrepancy between two traces on one grid."""

    methods: tuple
    times: np.ndarray
    px_error: np.ndarray
    max_abs_px_error: float
    mean_abs_px_error: float

    def __post_init__(self):
        if np.any(self.px_error < 0.0):
            raise ValueError("per-point errors must be non-negative")
        if self.max_abs_px_error < self.mean_abs_px_error:
            raise ValueError("max error below mean error")


def compare(a: StroboscopicTrace, b: StroboscopicTrace) -> ComparisonReport:
    """Per-point and aggregate |P_x| differences of two traces.

    The traces must share the period grid exactly; comparing values
    sampled at different times would be meaningless.
    """
    if a.times.shape != b.times.shape or not np.array_equal(a.times, b.times):
        raise ValueError(
            f"grid mismatch between {a.method} and {b.method} traces"
        )
    err = np.abs(p_x(a.r) - p_x(b.r))
    return ComparisonReport(
        methods=(a.method, b.method),
        times=a.times.copy(),
        px_error=err,
        max_abs_px_error=float(np.max(err)),
        mean_abs_px_error=float(np.mean(err)),
    )


@dataclass(frozen=True)
class ExperimentPreset:
    """Named parameter bundle for a reproducible run."""

    name: str
    tls: TlsParams
    drive: ChirpDrive
    r0: np.ndarray
    backends: tuple
    cfg: IntegratorConfig
    notes: tuple = ()


def _covering_periods(omega0: float, alpha: float, omega_target: float) -> int:
    """Smallest period count whose last point reaches the target frequency."""
    t_f = (omega_target - omega0) / alpha
    if t_f <= 0.0:
        raise ValueError("chirp never reaches the target frequency")
    phase_turns = (omega0 * t_f + alpha * t_f * t_f) / (2.0 * math.pi)
    # guard against 1179.9999999998 -> 1180 style rounding
    return int(math.ceil(phase_turns - 1e-9))


def fig3_preset() -> ExperimentPreset:
    """Upward chirp 5.9 -> 6.1 GHz across the 6 GHz resonance.

    Non-adiabatic rate alpha = 1.5 eta^2 with eta = 2*pi*0.027 rad/ns,
    started from the coherent state r = (0,0,1); about 29 ns, 178 drive
    periods.  The splitting is taken symmetric at 2*pi*6.0 rad/ns.
    """
    delta0 = 2.0 * math.pi * 6.0
    omega0 = 2.0 * math.pi * 5.9
    omega_f = 2.0 * math.pi * 6.1
    eta = 2.0 * math.pi * 0.027
    alpha = 1.5 * eta * eta
    n = _covering_periods(omega0, alpha, omega_f)
    return ExperimentPreset(
        name="fig3",
        tls=TlsParams(delta0=delta0),
        drive=ChirpDrive(omega0=omega0, alpha=alpha, eta=eta, n_periods=n),
        r0=COHERENT_STATE.copy(),
        backends=("exact", "rwa", "magnus1", "magnus2"),
        cfg=IntegratorConfig(),
        notes=(
            "splitting set to 2*pi*6.0 rad/ns from the quoted ~6 GHz resonance",
            "TLS taken symmetric (no static bias term)",
        ),
    )


def shalibo_preset() -> ExperimentPreset:
    """Downward chirp 6.1 -> 5.9 GHz at the experimental rate.

    alpha = -2*pi*0.001 rad/ns^2 (about 0.22 eta^2 in magnitude), started
    from the ground state; 200 ns, 1180 drive periods.
    """
    delta0 = 2.0 * math.pi * 6.0
    omega0 = 2.0 * math.pi * 6.1
    omega_f = 2.0 * math.pi * 5.9
    eta = 2.0 * math.pi * 0.027
    alpha = -2.0 * math.pi * 0.001
    n = _covering_periods(omega0, alpha, omega_f)
    return ExperimentPreset(
        name="shalibo",
        tls=TlsParams(delta0=delta0),
        drive=ChirpDrive(omega0=omega0, alpha=alpha, eta=eta, n_periods=n),
        r0=GROUND_STATE.copy(),
        backends=("exact", "rwa", "magnus1", "magnus2"),
        cfg=IntegratorConfig(),
        notes=(
            "splitting set to 2*pi*6.0 rad/ns from the quoted ~6 GHz resonance",
            "TLS taken symmetric (no static bias term)",
        ),
    )


def run_backends(preset: ExperimentPreset, grid: PeriodGrid = None) -> dict:
    """Run every backend requested by the preset on one shared grid."""
    if grid is None:
        grid = build_grid(preset.drive)
    out = {}
    for name in preset.backends:
        if name not in BACKEND_TAGS:
            raise ValueError(f"unknown backend {name!r}")
        out[name] = _run_one(
            name, preset.tls, preset.drive, grid, preset.r0, preset.cfg
        )
    return out


def _run_one(name, s, d, g, r0, cfg):
    if name == "exact":
        return run_exact(s, d, g, r0, cfg)
    if name == "rwa":
        return run_rwa(s, d, g, r0, cfg)
    if name == "magnus1":
        return run_magnus(s, d, g, r0, MagnusOrder.FIRST)
    if name == "magnus2":
        return run_magnus(s, d, g, r0, MagnusOrder.FIRST_PLUS_SECOND)
    raise ValueError(f"unknown backend {name!r}")


@dataclass(frozen=True)
class LzPoint:
    """One chirp rate of the Landau-Zener sweep."""

    alpha: float
    p_exact: float
    p_formula: float

    @property
    def abs_err(self) -> float:
        return abs(self.p_exact - self.p_formula)


_LZ_MIN_MARGIN = 20.0
_LZ_DEFAULT_MARGIN = 100.0
_LZ_OMEGA_FLOOR = 0.55  # of the splitting; keeps subharmonics out of the window


def lz_sweep(
    s: TlsParams,
    eta: float,
    alphas,
    cfg: IntegratorConfig = IntegratorConfig(rel_tol=1e-8, abs_tol=1e-10),
    margin: float = _LZ_DEFAULT_MARGIN,
):
    """Exact excitation probability vs the closed form, per chirp rate.

    For each alpha the ground state is swept across resonance on a square
    drive window detuned by `margin * u * eta` on both sides (at least 20,
    default 100: the abrupt window edges leave an interference residue of
    order 1/margin in the measured probability).  The window is rejected
    when it would push the drive frequency below 0.55 of the splitting,
    where subharmonic crossings invalidate the single-crossing formula.
    Returns a list of LzPoint in the order of `alphas`.
    """
    if margin < _LZ_MIN_MARGIN:
        raise ValueError(
            f"window must cover at least {_LZ_MIN_MARGIN} u*eta on both sides"
        )
    if not eta > 0.0:
        raise ValueError("sweep needs a positive drive amplitude")
    half_window = margin * s.u * eta
    omega0 = s.delta - half_window
    if omega0 < _LZ_OMEGA_FLOOR * s.delta:
        needed = (1.0 - _LZ_OMEGA_FLOOR) * s.delta / (margin * s.u)
        raise ValueError(
            "window too narrow: the detuning excursion "
            f"{half_window:.6g} rad/ns would sweep the drive below "
            f"{_LZ_OMEGA_FLOOR} of the splitting; need eta <= {needed:.6g} "
            "rad/ns at this margin (or a smaller margin)"
        )
    points = []
    for alpha in np.atleast_1d(np.asarray(alphas, dtype=float)):
        alpha = float(alpha)
        p_formula = lz_probability(s, eta, alpha)  # validates alpha > 0
        t_f = half_window / alpha
        out, _, _ = _kernels.propagate_segments(
            0,
            s.delta,
            s.u,
            s.v,
            eta,
            omega0,
            alpha,
            np.array([0.0, t_f]),
            GROUND_STATE,
            cfg.rel_tol,
            cfg.abs_tol,
            cfg.max_step,
            cfg.initial_step,
            True,
        )
        p_exact = float(excitation(out[-1]))
        points.append(LzPoint(alpha=alpha, p_exact=p_exact, p_formula=p_formula))
    return points


@dataclass(frozen=True)
class ResonanceScan:
    """Excitation response over a drive-frequency grid, per backend."""

    omega0s: np.ndarray
    methods: tuple
    response: np.ndarray
    peaks: dict


def _parabola_peak(x, y):
    """Vertex abscissa of the parabola through three points."""
    coeffs = np.polyfit(x, y, 2)
    if coeffs[0] == 0.0:
        return float(x[1])
    return float(-coeffs[1] / (2.0 * coeffs[0]))


def bloch_siegert_scan(
    s: TlsParams,
    eta: float,
    omega0s,
    n_periods: int = 1500,
    cfg: IntegratorConfig = IntegratorConfig(rel_tol=1e-6, abs_tol=1e-9),
    backends=("exact", "rwa", "magnus1", "magnus2"),
) -> ResonanceScan:
    """Locate the resonance peak of each backend on a harmonic drive.

    For every omega0 the ground state is driven without chirp for
    `n_periods` periods; the response is the Hann-weighted average of the
    excitation over the stroboscopic trace, which suppresses the Rabi
    oscillation and leaves the slowly varying envelope.  Each backend's
    peak is refined by a parabola through the three grid points around
    the maximum; a maximum on the grid boundary is rejected.
    """
    omega0s = np.asarray(omega0s, dtype=float)
    if omega0s.ndim != 1 or omega0s.shape[0] < 3:
        raise ValueError("need at least three drive frequencies")
    if np.any(np.diff(omega0s) <= 0.0):
        raise ValueError("drive frequencies must be strictly increasing")
    for name in backends:
        if name not in BACKEND_TAGS:
            raise ValueError(f"unknown backend {name!r}")

    weights = np.sin(np.pi * np.arange(n_periods + 1) / n_periods) ** 2
    wsum = float(np.sum(weights))
    response = np.empty((len(backends), omega0s.shape[0]))
    for col, w0 in enumerate(omega0s):
        drive = ChirpDrive(
            omega0=float(w0), alpha=0.0, eta=eta, n_periods=n_periods
        )
        grid = build_grid(drive)
        for row, name in enumerate(backends):
            trace = _run_one(name, s, drive, grid, GROUND_STATE, cfg)
            response[row, col] = float(
                np.dot(weights, excitation(trace.r)) / wsum
            )

    peaks = {}
    for row, name in enumerate(backends):
        k = int(np.argmax(response[row]))
        if k == 0 or k == omega0s.shape[0] - 1:
            raise ValueError(
                f"{name} response peaks on the scan boundary; widen the grid"
            )
        peaks[BACKEND_TAGS[name]] = _parabola_peak(
            omega0s[k - 1 : k + 2], response[row, k - 1 : k + 2]
        )
    return ResonanceScan(
        omega0s=omega0s,
        methods=tuple(BACKEND_TAGS[name] for name in backends),
        response=response,
        peaks=peaks,
    )
