"""Pauli-vector builders for every Hamiltonian of the chirped TLS.

All builders share one convention: PauliVector components are the
coefficients of sigma/2, so a Hamiltonian term c*sigma_z/2 stores h_z = c
and a term c*sigma_z stores h_z = 2c.  The driving phase is always
phi(t) = omega(t)*t = omega0*t + alpha*t^2, the only reading under which
the detuning delta(t) = Delta - omega0 - 2*alpha*t and the period points
omega(t_j)*t_j = 2*pi*j are mutually consistent.  The phase is reduced
modulo 2*pi in compensated arithmetic before any trigonometry, so the
builders remain accurate out to ~1e5 periods.

Frames provided:

* lab frame              (tunneling/bias basis, drive on sigma_z)
* eigenbasis at t = 0    (splitting on sigma_x, drive split by u, v)
* rotating frame         (full, with the counter-rotating 2*phi terms)
* rotating wave approx.  (oscillatory terms dropped)
* effective stroboscopic (first and first+second order, per period)
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .chirp import ChirpDrive, PeriodGrid, TlsParams, detuning_at, shorthand_delta, shorthand_omega
from .phase import phase_mod_2pi
from .su2 import PauliVector, decompose

__all__ = [
    "MagnusOrder",
    "EffectiveHamiltonian",
    "lab_h",
    "eigenframe_h",
    "rotating_h",
    "rwa_h",
    "h_eff",
    "second_order_harmonic",
    "second_order_chirp",
]


# leading coefficient of the alpha-linear sigma_z chirp correction
_CHIRP_Z = (3.0 - 4.0 * math.pi * math.pi) / 6.0


class MagnusOrder(enum.Enum):
    """Truncation order of the stroboscopic effective Hamiltonian."""

    FIRST = 1
    FIRST_PLUS_SECOND = 2


@dataclass(frozen=True)
class EffectiveHamiltonian:
    """Constant effective Hamiltonian governing period j (t_{j-1} -> t_j)."""

    j: int
    pv: PauliVector
    tau: float
    energy: float
    axis: np.ndarray


def lab_h(s: TlsParams, d: ChirpDrive, t: float) -> PauliVector:
    """Lab-frame Hamiltonian: tunneling on x, bias plus drive on z.

    H = delta0*sigma_x/2 + epsilon0*sigma_z/2 + eta*sigma_z*sin(phi(t)).
    """
    sphi = math.sin(phase_mod_2pi(d.omega0, d.alpha, t))
    return PauliVector(
        h=np.array([s.delta0, 0.0, s.epsilon0 + 2.0 * d.eta * sphi])
    )


def eigenframe_h(s: TlsParams, d: ChirpDrive, t: float) -> PauliVector:
    """Hamiltonian in the t = 0 eigenbasis.

    H = Delta*sigma_x/2 + u*eta*sigma_z*sin(phi) + v*eta*sigma_x*sin(phi).
    """
    sphi = math.sin(phase_mod_2pi(d.omega0, d.alpha, t))
    return PauliVector(
        h=np.array(
            [
                s.delta + 2.0 * s.v * d.eta * sphi,
                0.0,
                2.0 * s.u * d.eta * sphi,
            ]
        )
    )


def rotating_h(s: TlsParams, d: ChirpDrive, t: float) -> PauliVector:
    """Full rotating-frame Hamiltonian, counter-rotating terms included.

    h = (delta(t) + 2*v*eta*sin(phi),
         u*eta*(1 - cos(2*phi)),
         u*eta*sin(2*phi)).

    Transforming eigenframe_h into the frame rotating about x with the
    drive phase maps Bloch vectors as r -> R_x(-phi(t)) r, which leaves
    r_x invariant; this field generates exactly that transformed flow.
    The double-angle terms are formed from sin(phi), cos(phi) via
    1 - cos(2*phi) = 2*sin^2(phi) and sin(2*phi) = 2*sin(phi)*cos(phi),
    so at period points (phi = 2*pi*j) the y and z components vanish to
    second order in the reduced-phase rounding error: the static u*eta/2
    sigma_y term cancels exactly against the cos(2*phi) term there.
    """
    phi = phase_mod_2pi(d.omega0, d.alpha, t)
    sphi = math.sin(phi)
    cphi = math.cos(phi)
    ue = s.u * d.eta
    return PauliVector(
        h=np.array(
            [
                detuning_at(s, d, t) + 2.0 * s.v * d.eta * sphi,
                2.0 * ue * sphi * sphi,
                2.0 * ue * sphi * cphi,
            ]
        )
    )


def rwa_h(s: TlsParams, d: ChirpDrive, t: float) -> PauliVector:
    """Rotating-frame Hamiltonian with all oscillatory terms dropped.

    h = (delta(t), u*eta, 0); still time-dependent through delta(t).
    """
    return PauliVector(h=np.array([detuning_at(s, d, t), s.u * d.eta, 0.0]))


def second_order_harmonic(
    u: float, v: float, eta: float, omega_prev: float, mean_detuning: float
) -> np.ndarray:
    """Second-order terms shared with the harmonically driven system.

    (3*(eta*u)^2/(4*w), -u*eta*dbar/(2*w), -2*eta^2*u*v/w) with
    w = omega_{j-1} and dbar the period-averaged detuning.  The first
    component is the Bloch-Siegert shift of the resonance: it cancels the
    detuning at a drive frequency above the splitting, so the excitation
    peak sits at omega0 = Delta + 3*(eta*u)^2/(4*Delta) to this order.
    """
    return np.array(
        [
            3.0 * (eta * u) ** 2 / (4.0 * omega_prev),
            -u * eta * mean_detuning / (2.0 * omega_prev),
            -2.0 * eta * eta * u * v / omega_prev,
        ]
    )


def second_order_chirp(
    u: float, v: float, eta: float, alpha: float, omega_prev: float
) -> np.ndarray:
    """Second-order terms specific to the chirp.

    (4*alpha*v*eta/w^2, 0, (3 - 4*pi^2)/6 * alpha*u*eta/w^2) with
    w = omega_{j-1}; exactly linear in the chirp rate, hence suppressed
    when the frequency change within a single period is small.
    """
    w2 = omega_prev * omega_prev
    return np.array(
        [4.0 * alpha * v * eta / w2, 0.0, _CHIRP_Z * alpha * u * eta / w2]
    )


def h_eff(
    s: TlsParams,
    d: ChirpDrive,
    g: PeriodGrid,
    j: int,
    order: MagnusOrder,
) -> EffectiveHamiltonian:
    """Effective Hamiltonian for period j (evolution t_{j-1} -> t_j).

    First order: h = (delta_{j-1} - alpha*tau_j, u*eta, 0); the x
    component is the mean of delta(t) over the period.  First+second adds
    the harmonic (Bloch-Siegert-type) and chirp-specific corrections, both
    evaluated with the phase-derivative frequency omega_{j-1} =
    omega0 + 2*alpha*t_{j-1}.
    """
    if not 1 <= j <= g.n:
        raise IndexError(f"period index {j} outside grid 1..{g.n}")
    tau = float(g.tau[j - 1])
    mean_detuning = shorthand_delta(s, d, g, j - 1) - d.alpha * tau
    h = np.array([mean_detuning, s.u * d.eta, 0.0])
    if order is MagnusOrder.FIRST_PLUS_SECOND:
        omega_prev = shorthand_omega(d, g, j - 1)
        h = h + second_order_harmonic(s.u, s.v, d.eta, omega_prev, mean_detuning)
        h = h + second_order_chirp(s.u, s.v, d.eta, d.alpha, omega_prev)
    pv = PauliVector(h=h)
    energy, axis = decompose(pv)
    return EffectiveHamiltonian(j=j, pv=pv, tau=tau, energy=energy, axis=axis)
