# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) kernel for Bloch-vector propagation.

Mirror of the pure-Python kernel: same tableau, same PI controller, same
landing and renormalization rules, so both backends agree to integration
tolerance.  The compensated phase reduction uses the hardware fused
multiply-add in place of the Dekker split-product.
"""

import numpy as np

from ..errors import IntegrationError

from libc.math cimport cos, fabs, fma, fmod, round as c_round, sin, sqrt

__all__ = ["propagate_segments"]

cdef double TWO_PI = 6.283185307179586
cdef double TWO_PI_LO = 2.4492935982947064e-16

cdef double _C2 = 1.0 / 5.0
cdef double _C3 = 3.0 / 10.0
cdef double _C4 = 4.0 / 5.0
cdef double _C5 = 8.0 / 9.0
cdef double _A21 = 1.0 / 5.0
cdef double _A31 = 3.0 / 40.0
cdef double _A32 = 9.0 / 40.0
cdef double _A41 = 44.0 / 45.0
cdef double _A42 = -56.0 / 15.0
cdef double _A43 = 32.0 / 9.0
cdef double _A51 = 19372.0 / 6561.0
cdef double _A52 = -25360.0 / 2187.0
cdef double _A53 = 64448.0 / 6561.0
cdef double _A54 = -212.0 / 729.0
cdef double _A61 = 9017.0 / 3168.0
cdef double _A62 = -355.0 / 33.0
cdef double _A63 = 46732.0 / 5247.0
cdef double _A64 = 49.0 / 176.0
cdef double _A65 = -5103.0 / 18656.0
cdef double _B1 = 35.0 / 384.0
cdef double _B3 = 500.0 / 1113.0
cdef double _B4 = 125.0 / 192.0
cdef double _B5 = -2187.0 / 6784.0
cdef double _B6 = 11.0 / 84.0
cdef double _E1 = 71.0 / 57600.0
cdef double _E3 = -71.0 / 16695.0
cdef double _E4 = 71.0 / 1920.0
cdef double _E5 = -17253.0 / 339200.0
cdef double _E6 = 22.0 / 525.0
cdef double _E7 = -1.0 / 40.0

cdef double _SAFETY = 0.9
cdef double _BETA = 0.04
cdef double _EXPO1 = 0.2 - 0.75 * 0.04
cdef double _FAC_SHRINK = 5.0
cdef double _FAC_GROW = 0.1

cdef long _MAX_STEPS = 2000000


cdef inline double _phase_mod_2pi(double omega0, double alpha, double t) noexcept nogil:
    """(omega0*t + alpha*t**2) mod 2*pi via fma-compensated products."""
    cdef double p1 = omega0 * t
    cdef double e1 = fma(omega0, t, -p1)
    cdef double q = t * t
    cdef double eq = fma(t, t, -q)
    cdef double p2 = alpha * q
    cdef double e2 = fma(alpha, q, -p2) + alpha * eq
    cdef double r1 = fmod(p1, TWO_PI)
    cdef double c1 = -c_round((p1 - r1) / TWO_PI) * TWO_PI_LO
    cdef double r2 = fmod(p2, TWO_PI)
    cdef double c2 = -c_round((p2 - r2) / TWO_PI) * TWO_PI_LO
    cdef double phi = ((r1 + r2) + (c1 + c2)) + (e1 + e2)
    phi = fmod(phi, TWO_PI)
    if phi < 0.0:
        phi += TWO_PI
    return phi


cdef inline void _rhs(
    int mode, double delta, double u_eta, double ve2,
    double omega0, double alpha, double t,
    double rx, double ry, double rz,
    double* fx, double* fy, double* fz,
) noexcept nogil:
    cdef double phi, s, c, hy, hz
    cdef double hx = delta - omega0 - 2.0 * alpha * t
    if mode == 0:
        phi = _phase_mod_2pi(omega0, alpha, t)
        s = sin(phi)
        c = cos(phi)
        hx = hx + ve2 * s
        hy = 2.0 * u_eta * s * s
        hz = 2.0 * u_eta * s * c
        fx[0] = hy * rz - hz * ry
        fy[0] = hz * rx - hx * rz
        fz[0] = hx * ry - hy * rx
    else:
        fx[0] = u_eta * rz
        fy[0] = -hx * rz
        fz[0] = hx * ry - u_eta * rx


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
    """Compiled counterpart of the pure-Python propagate_segments."""
    cdef int cmode = int(mode)
    if cmode != 0 and cmode != 1:
        raise ValueError(f"unknown propagation mode {mode!r}")
    cdef double cdelta = delta
    cdef double comega0 = omega0
    cdef double calpha = alpha
    cdef double u_eta = float(u) * float(eta)
    cdef double ve2 = 2.0 * float(v) * float(eta)
    cdef double crel = rel_tol
    cdef double cabs = abs_tol
    if not (crel > 0.0 and cabs > 0.0):
        raise ValueError("tolerances must be positive")
    cdef double hmax = max_step
    cdef bint renorm = bool(renormalize)

    tarr = np.ascontiguousarray(times, dtype=np.float64)
    cdef double[::1] tv = tarr
    cdef Py_ssize_t n_nodes = tv.shape[0]
    if n_nodes < 2:
        raise ValueError("need at least two nodes to integrate")
    cdef Py_ssize_t i
    for i in range(1, n_nodes):
        if not tv[i] > tv[i - 1]:
            raise ValueError("nodes must be strictly increasing")

    r0arr = np.ascontiguousarray(r0, dtype=np.float64)
    if r0arr.shape != (3,):
        raise ValueError("initial state must have three components")
    out_arr = np.empty((n_nodes, 3), dtype=np.float64)
    cdef double[:, ::1] out = out_arr

    cdef double y0 = r0arr[0]
    cdef double y1 = r0arr[1]
    cdef double y2 = r0arr[2]
    out[0, 0] = y0
    out[0, 1] = y1
    out[0, 2] = y2
    cdef double norm0 = sqrt(y0 * y0 + y1 * y1 + y2 * y2)

    cdef double t = tv[0]
    cdef double h = initial_step
    if hmax < h:
        h = hmax
    if not h > 0.0:
        raise ValueError("initial_step must be positive")
    cdef double facold = 1e-4
    cdef long naccept = 0
    cdef long nreject = 0
    cdef long nsteps = 0

    cdef double tend, remaining, dt, a, scale
    cdef bint landing
    cdef double w0, w1, w2, z0, z1, z2
    cdef double k10, k11, k12, k20, k21, k22, k30, k31, k32
    cdef double k40, k41, k42, k50, k51, k52, k60, k61, k62
    cdef double k70, k71, k72
    cdef double e0, e1, e2, sc0, sc1, sc2, q0, q1, q2, err, fac11, fac
    cdef double hmin = 1e-6 * <double> initial_step

    _rhs(cmode, cdelta, u_eta, ve2, comega0, calpha, t, y0, y1, y2,
         &k10, &k11, &k12)
    for i in range(1, n_nodes):
        tend = tv[i]
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
            _rhs(cmode, cdelta, u_eta, ve2, comega0, calpha,
                 t + _C2 * dt, w0, w1, w2, &k20, &k21, &k22)

            w0 = y0 + dt * (_A31 * k10 + _A32 * k20)
            w1 = y1 + dt * (_A31 * k11 + _A32 * k21)
            w2 = y2 + dt * (_A31 * k12 + _A32 * k22)
            _rhs(cmode, cdelta, u_eta, ve2, comega0, calpha,
                 t + _C3 * dt, w0, w1, w2, &k30, &k31, &k32)

            w0 = y0 + dt * (_A41 * k10 + _A42 * k20 + _A43 * k30)
            w1 = y1 + dt * (_A41 * k11 + _A42 * k21 + _A43 * k31)
            w2 = y2 + dt * (_A41 * k12 + _A42 * k22 + _A43 * k32)
            _rhs(cmode, cdelta, u_eta, ve2, comega0, calpha,
                 t + _C4 * dt, w0, w1, w2, &k40, &k41, &k42)

            w0 = y0 + dt * (_A51 * k10 + _A52 * k20 + _A53 * k30 + _A54 * k40)
            w1 = y1 + dt * (_A51 * k11 + _A52 * k21 + _A53 * k31 + _A54 * k41)
            w2 = y2 + dt * (_A51 * k12 + _A52 * k22 + _A53 * k32 + _A54 * k42)
            _rhs(cmode, cdelta, u_eta, ve2, comega0, calpha,
                 t + _C5 * dt, w0, w1, w2, &k50, &k51, &k52)

            w0 = y0 + dt * (_A61 * k10 + _A62 * k20 + _A63 * k30
                            + _A64 * k40 + _A65 * k50)
            w1 = y1 + dt * (_A61 * k11 + _A62 * k21 + _A63 * k31
                            + _A64 * k41 + _A65 * k51)
            w2 = y2 + dt * (_A61 * k12 + _A62 * k22 + _A63 * k32
                            + _A64 * k42 + _A65 * k52)
            _rhs(cmode, cdelta, u_eta, ve2, comega0, calpha,
                 t + dt, w0, w1, w2, &k60, &k61, &k62)

            z0 = y0 + dt * (_B1 * k10 + _B3 * k30 + _B4 * k40
                            + _B5 * k50 + _B6 * k60)
            z1 = y1 + dt * (_B1 * k11 + _B3 * k31 + _B4 * k41
                            + _B5 * k51 + _B6 * k61)
            z2 = y2 + dt * (_B1 * k12 + _B3 * k32 + _B4 * k42
                            + _B5 * k52 + _B6 * k62)
            _rhs(cmode, cdelta, u_eta, ve2, comega0, calpha,
                 t + dt, z0, z1, z2, &k70, &k71, &k72)

            e0 = dt * (_E1 * k10 + _E3 * k30 + _E4 * k40 + _E5 * k50
                       + _E6 * k60 + _E7 * k70)
            e1 = dt * (_E1 * k11 + _E3 * k31 + _E4 * k41 + _E5 * k51
                       + _E6 * k61 + _E7 * k71)
            e2 = dt * (_E1 * k12 + _E3 * k32 + _E4 * k42 + _E5 * k52
                       + _E6 * k62 + _E7 * k72)
            sc0 = cabs + crel * (fabs(y0) if fabs(y0) > fabs(z0) else fabs(z0))
            sc1 = cabs + crel * (fabs(y1) if fabs(y1) > fabs(z1) else fabs(z1))
            sc2 = cabs + crel * (fabs(y2) if fabs(y2) > fabs(z2) else fabs(z2))
            q0 = e0 / sc0
            q1 = e1 / sc1
            q2 = e2 / sc2
            err = sqrt((q0 * q0 + q1 * q1 + q2 * q2) / 3.0)

            fac11 = err ** _EXPO1
            if err <= 1.0:
                facold = err if err > 1e-4 else 1e-4
                t = tend if landing else t + dt
                y0 = z0
                y1 = z1
                y2 = z2
                k10 = k70
                k11 = k71
                k12 = k72
                naccept += 1
                fac = fac11 / (facold ** _BETA * _SAFETY)
                if not fac < _FAC_SHRINK:
                    fac = _FAC_SHRINK
                if not fac > _FAC_GROW:
                    fac = _FAC_GROW
                h = dt / fac
                if h > hmax:
                    h = hmax
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
            scale = norm0 / sqrt(y0 * y0 + y1 * y1 + y2 * y2)
            y0 *= scale
            y1 *= scale
            y2 *= scale
            _rhs(cmode, cdelta, u_eta, ve2, comega0, calpha, t, y0, y1, y2,
                 &k10, &k11, &k12)
        out[i, 0] = y0
        out[i, 1] = y1
        out[i, 2] = y2

    return out_arr, int(naccept), int(nreject)
