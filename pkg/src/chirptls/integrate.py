"""Adaptive integration of the Bloch equation for arbitrary Hamiltonians.

This is the flexible entry point: any callable t -> PauliVector can be
integrated.  The stroboscopic production paths in `propagators` bypass the
per-step callback and use the selected kernel backend directly; both routes
run the same Dormand-Prince 5(4) scheme.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._kernels._python import dp45_span
from .su2 import PauliVector

__all__ = ["IntegratorConfig", "bloch_rhs", "integrate"]


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and step bounds for the adaptive integrator.

    Times share the unit of 1/angular-frequency used by the Hamiltonian
    (nanoseconds when frequencies are rad/ns).
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    initial_step: float = 1e-2

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            value = getattr(self, name)
            if not 0.0 < value <= 1e-2:
                raise ValueError(f"{name} must lie in (0, 1e-2], got {value!r}")
        if not self.max_step > 0.0:
            raise ValueError(f"max_step must be positive, got {self.max_step!r}")
        if not 0.0 < self.initial_step < math.inf:
            raise ValueError(
                f"initial_step must be positive and finite, got {self.initial_step!r}"
            )


def bloch_rhs(h: PauliVector, r) -> np.ndarray:
    """Bloch equation right-hand side dr/dt = h x r.

    The cross-product orientation is fixed so that evolving under a
    constant h for a time tau reproduces apply(rotation_matrix(...), r)
    with angle |h|*tau about h/|h|.
    """
    return np.cross(h.h, np.asarray(r, dtype=float))


def integrate(h_fn, r0, t0: float, t1: float, cfg: IntegratorConfig = IntegratorConfig()):
    """Propagate r0 from t0 to t1 under dr/dt = h_fn(t) x r.

    Returns the Bloch vector at t1 (a copy of r0 when t1 == t0).  The
    result is rescaled to |r0| on landing, so norm drift never exceeds
    rounding.  Raises IntegrationError when step control fails.
    """
    t0 = float(t0)
    t1 = float(t1)
    if t1 < t0:
        raise ValueError(f"t1 must not precede t0, got {t0!r} -> {t1!r}")
    r0 = np.asarray(r0, dtype=float)
    if r0.shape != (3,):
        raise ValueError("initial state must have three components")
    if t1 == t0:
        return r0.copy()

    def rhs(t, rx, ry, rz):
        hx, hy, hz = h_fn(t).h
        return (
            hy * rz - hz * ry,
            hz * rx - hx * rz,
            hx * ry - hy * rx,
        )

    out, _, _ = dp45_span(
        rhs,
        r0,
        np.array([t0, t1]),
        cfg.rel_tol,
        cfg.abs_tol,
        cfg.max_step,
        cfg.initial_step,
        True,
    )
    return out[1]
