"""Accurate evaluation of the linear-chirp driving phase.

The driving phase is phi(t) = omega0*t + alpha*t**2.  Over long runs phi
reaches 1e5..1e6 rad, so forming it naively and feeding it to sin/cos
loses up to ~1e-9 rad to the rounding of the products omega0*t and
alpha*t**2 alone.  Both products are therefore formed as exact
double-double pairs (Dekker two-product) and reduced modulo 2*pi term by
term; IEEE fmod is exact, and the deficit of the double 2*pi against the
true 2*pi is restored via its tail TWO_PI_LO.  The reduced phase is
accurate to a few 1e-16 rad in absolute terms for any t reachable here.
"""

import math

TWO_PI = 6.283185307179586
# 2*pi = TWO_PI + TWO_PI_LO to double-double accuracy
TWO_PI_LO = 2.4492935982947064e-16

_SPLIT = 134217729.0  # 2**27 + 1, Dekker splitting constant


def two_prod(a: float, b: float) -> tuple[float, float]:
    """Exact product a*b = hi + lo with hi = fl(a*b)."""
    p = a * b
    ah = _SPLIT * a
    ah = ah - (ah - a)
    al = a - ah
    bh = _SPLIT * b
    bh = bh - (bh - b)
    bl = b - bh
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def _mod_two_pi(x: float) -> tuple[float, float]:
    """Reduce x modulo the true 2*pi.

    Returns (r, c) with x === r + c (mod 2*pi); r = fmod(x, TWO_PI) and c
    the correction from the tail of the double-precision 2*pi.
    """
    r = math.fmod(x, TWO_PI)
    n = round((x - r) / TWO_PI)
    return r, -n * TWO_PI_LO


def phase_mod_2pi(omega0: float, alpha: float, t: float) -> float:
    """(omega0*t + alpha*t**2) mod 2*pi, in [0, 2*pi).

    Accurate to a few 1e-16 rad absolute even when the unreduced phase is
    ~1e6 rad, where direct evaluation would already have lost ~1e-10 rad.
    """
    p1, e1 = two_prod(omega0, t)
    q, eq = two_prod(t, t)
    p2, e2 = two_prod(alpha, q)
    e2 += alpha * eq

    r1, c1 = _mod_two_pi(p1)
    r2, c2 = _mod_two_pi(p2)
    phi = math.fsum((r1, r2, c1, c2, e1, e2))
    phi = math.fmod(phi, TWO_PI)
    if phi < 0.0:
        phi += TWO_PI
    return phi


def phase_residual(omega0: float, alpha: float, t: float, j: int) -> float:
    """omega(t)*t - 2*pi*j evaluated in compensated arithmetic.

    Used to validate and polish period points, where the two terms cancel
    to ~1e-10 of their magnitude.
    """
    p1, e1 = two_prod(omega0, t)
    q, eq = two_prod(t, t)
    p2, e2 = two_prod(alpha, q)
    e2 += alpha * eq
    m, em = two_prod(TWO_PI, float(j))
    em += TWO_PI_LO * j
    return math.fsum((p1, p2, -m, e1, e2, -em))
