"""Frequency-chirped two-level system: stroboscopic and exact propagation.

A driven TLS whose drive frequency ramps linearly in time is propagated
four ways on the same per-period time grid: exact adaptive integration of
the full rotating-frame dynamics, the rotating-wave approximation, and
first- and second-order stroboscopic effective rotations.  Closed-form
Landau-Zener probabilities and a resonance-shift scan quantify where the
cheap propagators hold up.
"""

from ._kernels import BACKEND as _KERNEL_BACKEND
from .analysis import (
    ComparisonReport,
    ExperimentPreset,
    LzPoint,
    ResonanceScan,
    bloch_siegert_scan,
    compare,
    excitation,
    fig3_preset,
    lz_sweep,
    p_x,
    run_backends,
    shalibo_preset,
)
from .chirp import (
    ChirpDrive,
    PeriodGrid,
    TlsParams,
    build_grid,
    detuning_at,
    omega_at,
    period_point,
)
from .errors import ChirpTlsError, ConfigError, IntegrationError
from .hamiltonians import (
    EffectiveHamiltonian,
    MagnusOrder,
    eigenframe_h,
    h_eff,
    lab_h,
    rotating_h,
    rwa_h,
)
from .integrate import IntegratorConfig, bloch_rhs, integrate
from .propagators import (
    METHODS,
    StroboscopicTrace,
    lz_probability,
    run_exact,
    run_magnus,
    run_rwa,
)
from .su2 import (
    AxisAngle,
    PauliVector,
    axis_angle,
    decompose,
    rotation_matrix,
    so3_of_su2,
    su2_exponential,
)

__version__ = "0.1.0"


def kernel_backend() -> str:
    """Which propagation kernel is active: 'native' or 'python'."""
    return _KERNEL_BACKEND


__all__ = [
    "AxisAngle",
    "ChirpDrive",
    "ChirpTlsError",
    "ComparisonReport",
    "ConfigError",
    "EffectiveHamiltonian",
    "ExperimentPreset",
    "IntegrationError",
    "IntegratorConfig",
    "LzPoint",
    "METHODS",
    "MagnusOrder",
    "PauliVector",
    "PeriodGrid",
    "ResonanceScan",
    "StroboscopicTrace",
    "TlsParams",
    "axis_angle",
    "bloch_rhs",
    "bloch_siegert_scan",
    "build_grid",
    "compare",
    "decompose",
    "detuning_at",
    "eigenframe_h",
    "excitation",
    "fig3_preset",
    "h_eff",
    "integrate",
    "kernel_backend",
    "lab_h",
    "lz_probability",
    "lz_sweep",
    "omega_at",
    "p_x",
    "period_point",
    "rotating_h",
    "rotation_matrix",
    "run_backends",
    "run_exact",
    "run_magnus",
    "run_rwa",
    "rwa_h",
    "shalibo_preset",
    "so3_of_su2",
    "su2_exponential",
    "__version__",
]
