"""Pure-Python Dormand-Prince 5(4) kernel for Bloch-vector propagation.

This is the fallback used when the compiled extension is unavailable; it
implements exactly the same algorithm (same tableau, same PI step-size
controller, same landing and renormalization rules) so results from the
two backends agree to the integration tolerance.  The state is unrolled
into three scalars throughout; with only three components, plain floats
beat ndarray temporaries by a wide margin.
"""

import math

import numpy as np

from ..errors import IntegrationError
from ..phase import phase_mod_2pi

__all__ = ["dp45_span", "propagate_segments"]

# Dormand-Prince 5(4) tableau (the dopri5 pair, FSAL).
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
)
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = (
    35.0 / 384.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
)
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

# Hairer's PI controller constants for dopri5.
_SAFETY = 0.9
_BETA = 0.04
_EXPO1 = 0.2 - 0.75 * _BETA
_FAC_SHRINK = 5.0   # reject: h -> at most h/5
_FAC_GROW = 0.1     # accept: h -> at most 10*h

_MAX_STEPS = 2_000_000


def dp45_span(rhs, r0, times, rel_tol, abs_tol, max_step, initial_step, renorm):
    """Integrate dr/dt = rhs(t, rx, ry, rz) through the node list `times`.

    The integrator lands exactly on every node (the node time is assigned,
    not accumulated), records the state there, and when `renorm` is set
    rescales it to the initial norm before continuing; the true flow is a
    rotation, so the rescaling removes pure discretization drift.  Returns
    (out, naccept, nreject) with out[0] = r0.  Raises IntegrationError on
    step-size underflow or when the step budget is exhausted.
    """
    times = np.asarray(times, dtype=float)
    n_nodes = times.shape[0]
    if n_nodes < 2:
        raise ValueError("need at least two nodes to integrate")
    if not np.all(np.diff(times) > 0.0):
        raise ValueError("nodes must be strictly increasing")
    rel_tol = float(rel_tol)
    abs_tol = float(abs_tol)
    if not (rel_tol > 0.0 and abs_tol > 0.0):
        raise ValueError("tolerances must be positive")

    out = np.empty((n_nodes, 3))
    y0 = float(r0[0])
    y1 = float(r0[1])
    y2 = float(r0[2])
    out[0, 0], out[0, 1], out[0, 2] = y0, y1, y2
    norm0 = math.sqrt(y0 * y0 + y1 * y1 + y2 * y2)

    t = float(times[0])
    h = min(float(initial_step), float(max_step))
    if not h > 0.0:
        raise ValueError("initial_step must be positive")
    hmin = 1e-6 * float(initial_step)
    facold = 1e-4
    naccept = 0
    nreject = 0
    nsteps = 0

    k10, k11, k12 = rhs(t, y0, y1, y2)
    for idx in range(1, n_nodes):
        tend = float(times[idx])
        while t < tend:
            nsteps += 1
            if nsteps > _MAX_STEPS:
                raise IntegrationError(
                    f"step budget exceeded ({_MAX_STEPS}) at t={t!r}"
                )
            remaining = tend - t
            landing = remaining <= h
            dt = remaining if landing else h

            a = dt * _A21
            w0 = y0 + a * k10
            w1 = y1 + a * k11
            w2 = y2 + a * k12
            k20, k21, k22 = rhs(t + _C2 * dt, w0, w1, w2)

            w0 = y0 + dt * (_A31 * k10 + _A32 * k20)
            w1 = y1 + dt * (_A31 * k11 + _A32 * k21)
            w2 = y2 + dt * (_A31 * k12 + _A32 * k22)
            k30, k31, k32 = rhs(t + _C3 * dt, w0, w1, w2)

            w0 = y0 + dt * (_A41 * k10 + _A42 * k20 + _A43 * k30)
            w1 = y1 + dt * (_A41 * k11 + _A42 * k21 + _A43 * k31)
            w2 = y2 + dt * (_A41 * k12 + _A42 * k22 + _A43 * k32)
            k40, k41, k42 = rhs(t + _C4 * dt, w0, w1, w2)

            w0 = y0 + dt * (_A51 * k10 + _A52 * k20 + _A53 * k30 + _A54 * k40)
            w1 = y1 + dt * (_A51 * k11 + _A52 * k21 + _A53 * k31 + _A54 * k41)
            w2 = y2 + dt * (_A51 * k12 + _A52 * k22 + _A53 * k32 + _A54 * k42)
            k50, k51, k52 = rhs(t + _C5 * dt, w0, w1, w2)

            w0 = y0 + dt * (
                _A61 * k10 + _A62 * k20 + _A63 * k30 + _A64 * k40 + _A65 * k50
            )
            w1 = y1 + dt * (
                _A61 * k11 + _A62 * k21 + _A63 * k31 + _A64 * k41 + _A65 * k51
            )
            w2 = y2 + dt * (
                _A61 * k12 + _A62 * k22 + _A63 * k32 + _A64 * k42 + _A65 * k52
            )
            k60, k61, k62 = rhs(t + dt, w0, w1, w2)

            z0 = y0 + dt * (
                _B1 * k10 + _B3 * k30 + _B4 * k40 + _B5 * k50 + _B6 * k60
            )
            z1 = y1 + dt * (
                _B1 * k11 + _B3 * k31 + _B4 * k41 + _B5 * k51 + _B6 * k61
            )
            z2 = y2 + dt * (
                _B1 * k12 + _B3 * k32 + _B4 * k42 + _B5 * k52 + _B6 * k62
            )
            k70, k71, k72 = rhs(t + dt, z0, z1, z2)

            e0 = dt * (
                _E1 * k10 + _E3 * k30 + _E4 * k40 + _E5 * k50 + _E6 * k60 + _E7 * k70
            )
            e1 = dt * (
                _E1 * k11 + _E3 * k31 + _E4 * k41 + _E5 * k51 + _E6 * k61 + _E7 * k71
            )
            e2 = dt * (
                _E1 * k12 + _E3 * k32 + _E4 * k42 + _E5 * k52 + _E6 * k62 + _E7 * k72
            )
            sc0 = abs_tol + rel_tol * max(abs(y0), abs(z0))
            sc1 = abs_tol + rel_tol * max(abs(y1), abs(z1))
            sc2 = abs_tol + rel_tol * max(abs(y2), abs(z2))
            q0 = e0 / sc0
            q1 = e1 / sc1
            q2 = e2 / sc2
            err = math.sqrt((q0 * q0 + q1 * q1 + q2 * q2) / 3.0)

            fac11 = err ** _EXPO1
            if err <= 1.0:
                # accept (NaN cannot land here: comparisons with it fail)
                facold = max(err, 1e-4)
                t = tend if landing else t + dt
                y0, y1, y2 = z0, z1, z2
                k10, k11, k12 = k70, k71, k72
                naccept += 1
                fac = fac11 / (facold ** _BETA * _SAFETY)
                if not fac < _FAC_SHRINK:
                    fac = _FAC_SHRINK
                if not fac > _FAC_GROW:
                    fac = _FAC_GROW
                h = min(dt / fac, float(max_step))
            else:
                nreject += 1
                fac = fac11 / _SAFETY
                if not fac < _FAC_SHRINK:
                    fac = _FAC_SHRINK
                if fac < 1.0:
                    fac = 1.0
                h = dt / fac
                # underflow only counts when error control forces it; a
                # tiny truncated landing step is not a failure
                if h < hmin:
                    raise IntegrationError(
                        f"step size underflow (h={h:.3e} < {hmin:.3e}) at t={t!r}"
                    )

        if renorm and norm0 > 0.0:
            scale = norm0 / math.sqrt(y0 * y0 + y1 * y1 + y2 * y2)
            y0 *= scale
            y1 *= scale
            y2 *= scale
            k10, k11, k12 = rhs(t, y0, y1, y2)
        out[idx, 0], out[idx, 1], out[idx, 2] = y0, y1, y2

    return out, naccept, nreject


def propagate_segments(
    mode,
    delta,
    u,
    v,
    eta,
    omega0,
    alpha,
    times,
    r0,
    rel_tol,
    abs_tol,
    max_step,
    initial_step,
    renormalize,
):
    """Propagate the Bloch vector through `times` in the rotating frame.

    mode 0 keeps the full Hamiltonian including the counter-rotating
    double-phase terms; mode 1 keeps only the rotating-wave part.  Both
    use dr/dt = h x r with h the Pauli-vector components of the frame
    Hamiltonian.  Returns (out, naccept, nreject) like dp45_span.
    """
    delta = float(delta)
    u = float(u)
    v = float(v)
    eta = float(eta)
    omega0 = float(omega0)
    alpha = float(alpha)
    ue = u * eta
    ve2 = 2.0 * v * eta

    if mode == 0:

        def rhs(t, rx, ry, rz):
            phi = phase_mod_2pi(omega0, alpha, t)
            s = math.sin(phi)
            c = math.cos(phi)
            hx = (delta - omega0 - 2.0 * alpha * t) + ve2 * s
            hy = 2.0 * ue * s * s
            hz = 2.0 * ue * s * c
            return (
                hy * rz - hz * ry,
                hz * rx - hx * rz,
                hx * ry - hy * rx,
            )

    elif mode == 1:

        def rhs(t, rx, ry, rz):
            hx = delta - omega0 - 2.0 * alpha * t
            return (
                ue * rz,
                -hx * rz,
                hx * ry - ue * rx,
            )

    else:
        raise ValueError(f"unknown propagation mode {mode!r}")

    return dp45_span(
        rhs, r0, times, rel_tol, abs_tol, max_step, initial_step, renormalize
    )
