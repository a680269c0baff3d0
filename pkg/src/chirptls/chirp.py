"""Linear-chirp drive protocol and the stroboscopic period grid.

The drive frequency is omega(t) = omega0 + alpha*t, so the accumulated
phase is phi(t) = omega(t)*t and the instantaneous detuning against the
system splitting is delta(t) = Delta - omega0 - 2*alpha*t (the factor 2
comes from d/dt[omega(t)*t]).  Period points t_j are the times where the
phase completes j full cycles, phi(t_j) = 2*pi*j; the stroboscopic
propagators evolve from one period point to the next.
"""

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .phase import phase_residual

__all__ = [
    "TlsParams",
    "ChirpDrive",
    "PeriodGrid",
    "omega_at",
    "detuning_at",
    "period_point",
    "build_grid",
    "shorthand_omega",
    "shorthand_delta",
]

# informative validity thresholds: eta << omega0 and 2*pi*alpha << omega0**2
_VALIDITY_WARN = 0.1


@dataclass(frozen=True)
class TlsParams:
    """Static two-level system: tunneling amplitude and bias.

    Both are angular frequencies.  The derived quantities are the level
    splitting Delta = sqrt(delta0**2 + epsilon0**2) and the eigenbasis
    mixing coefficients u = delta0/Delta, v = epsilon0/Delta.
    """

    delta0: float
    epsilon0: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.delta0) and math.isfinite(self.epsilon0)):
            raise ValueError("TLS parameters must be finite")
        if self.delta == 0.0:
            raise ValueError("degenerate TLS: delta0 = epsilon0 = 0")

    @property
    def delta(self) -> float:
        """Level splitting Delta = sqrt(delta0^2 + epsilon0^2)."""
        return math.hypot(self.delta0, self.epsilon0)

    @property
    def u(self) -> float:
        return self.delta0 / self.delta

    @property
    def v(self) -> float:
        return self.epsilon0 / self.delta


@dataclass(frozen=True)
class ChirpDrive:
    """Linear frequency chirp omega(t) = omega0 + alpha*t with strength eta.

    The drive starts at t = 0; a window starting elsewhere is expressed by
    choosing omega0 at the window start.  Negative alpha (downward chirp,
    as in the Shalibo-style experiment) is allowed as long as omega stays
    positive and the phase keeps advancing over the grid; build_grid
    validates both.
    """

    omega0: float
    alpha: float
    eta: float
    n_periods: int

    def __post_init__(self):
        if not all(
            math.isfinite(x) for x in (self.omega0, self.alpha, self.eta)
        ):
            raise ValueError("drive parameters must be finite")
        if self.omega0 <= 0.0:
            raise ValueError(f"omega0 must be positive, got {self.omega0!r}")
        if self.eta < 0.0:
            raise ValueError(f"eta must be non-negative, got {self.eta!r}")
        if self.n_periods < 1:
            raise ValueError(f"n_periods must be >= 1, got {self.n_periods!r}")

    def validity_ratios(self) -> dict[str, float]:
        """Smallness parameters of the expansion regime (informative only).

        eta/omega0 and 2*pi*|alpha|/omega0**2 should both be small for the
        stroboscopic effective Hamiltonians to be accurate; callers probing
        the breakdown regime are deliberately allowed past this.
        """
        return {
            "eta_over_omega0": self.eta / self.omega0,
            "chirp_per_period": 2.0 * math.pi * abs(self.alpha) / self.omega0**2,
        }


def omega_at(d: ChirpDrive, t: float) -> float:
    """Instantaneous drive frequency omega0 + alpha*t."""
    return d.omega0 + d.alpha * t


def detuning_at(s: TlsParams, d: ChirpDrive, t: float) -> float:
    """Detuning delta(t) = Delta - omega0 - 2*alpha*t.

    The factor 2 on alpha is the derivative of the phase omega(t)*t, not
    omega(t) itself.
    """
    return s.delta - d.omega0 - 2.0 * d.alpha * t


def period_point(d: ChirpDrive, j: int) -> float:
    """The j-th period point: the time with omega(t_j)*t_j = 2*pi*j.

    Computed as the chronologically first non-negative root of
    alpha*t^2 + omega0*t - 2*pi*j = 0 in the rationalized form
    t_j = 4*pi*j / (omega0 + sqrt(omega0^2 + 8*pi*alpha*j)), which is free
    of subtractive cancellation when 8*pi*alpha*j << omega0^2, then
    polished with one Newton step in compensated arithmetic so the phase
    residual stays at the rounding floor of t_j itself.
    """
    if j < 0:
        raise ValueError(f"period index must be >= 0, got {j}")
    if j == 0:
        return 0.0
    if d.alpha == 0.0:
        # harmonic drive: keep t_j bit-identical to the textbook expression
        return 2.0 * math.pi * j / d.omega0
    disc = d.omega0 * d.omega0 + 8.0 * math.pi * d.alpha * j
    if disc < 0.0:
        j_max = d.omega0 * d.omega0 / (8.0 * math.pi * abs(d.alpha))
        raise ValueError(
            f"period point {j} lies past the chirp turnaround: negative "
            f"discriminant (max reachable index ~ {j_max:.1f})"
        )
    t = 4.0 * math.pi * j / (d.omega0 + math.sqrt(disc))
    # Newton polish: one step on f(t) = omega(t)*t - 2*pi*j with f evaluated
    # in compensated arithmetic; brings t_j to ~0.5 ulp of the true root.
    slope = d.omega0 + 2.0 * d.alpha * t
    if slope > 0.0:
        t -= phase_residual(d.omega0, d.alpha, t, j) / slope
    return t


@dataclass(frozen=True)
class PeriodGrid:
    """Ordered period points t_0 = 0 < t_1 < ... < t_N.

    tau[j-1] = t_j - t_{j-1} is the j-th period and omega_bar[j-1] its
    mean angular frequency 2*pi/tau_j.
    """

    t: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        if t.ndim != 1 or t.size < 2:
            raise ValueError("grid needs at least the points t_0 and t_1")
        if t[0] != 0.0:
            raise ValueError(f"grid must start at t = 0, got {t[0]!r}")
        if np.any(np.diff(t) <= 0.0):
            raise ValueError("period points must be strictly increasing")
        object.__setattr__(self, "t", t)

    @property
    def n(self) -> int:
        """Number of full periods N."""
        return self.t.size - 1

    @cached_property
    def tau(self) -> np.ndarray:
        """Periods tau_j = t_j - t_{j-1}, j = 1..N (index j-1)."""
        return np.diff(self.t)

    @cached_property
    def omega_bar(self) -> np.ndarray:
        """Mean angular frequencies 2*pi/tau_j, j = 1..N (index j-1)."""
        return 2.0 * math.pi / self.tau


def build_grid(d: ChirpDrive) -> PeriodGrid:
    """Period grid t_0..t_N for the drive, with N = d.n_periods.

    Validates that omega(t) stays positive over the whole window, that the
    phase residual |omega(t_j)*t_j - 2*pi*j| stays below
    1e-10*max(1, 2*pi*j) at every point, and warns (without rejecting)
    when the drive leaves the weak-drive/weak-chirp validity regime.
    """
    ratios = d.validity_ratios()
    for name, value in ratios.items():
        if value > _VALIDITY_WARN:
            warnings.warn(
                f"drive outside expansion validity regime: {name} = {value:.3g}",
                stacklevel=2,
            )
    t = np.empty(d.n_periods + 1)
    for j in range(d.n_periods + 1):
        t[j] = period_point(d, j)
    if omega_at(d, t[-1]) <= 0.0:
        raise ValueError(
            f"omega(t) crosses zero inside the grid: omega(t_N) = "
            f"{omega_at(d, t[-1])!r}"
        )
    for j in range(1, d.n_periods + 1):
        resid = abs(phase_residual(d.omega0, d.alpha, t[j], j))
        bound = 1e-10 * max(1.0, 2.0 * math.pi * j)
        if resid > bound:
            raise ValueError(
                f"period point {j} failed the phase residual bound: "
                f"{resid:.3e} > {bound:.3e}"
            )
    return PeriodGrid(t=t)


def _check_index(g: PeriodGrid, j: int) -> None:
    if not 0 <= j <= g.n:
        raise IndexError(f"period index {j} outside grid 0..{g.n}")


def shorthand_omega(d: ChirpDrive, g: PeriodGrid, j: int) -> float:
    """The phase-derivative frequency omega_j = omega0 + 2*alpha*t_j.

    This is the rate at which the driving phase advances at t_j, and the
    frequency entering the second-order effective Hamiltonian; it differs
    from the instantaneous omega(t_j) = omega0 + alpha*t_j by alpha*t_j.
    """
    _check_index(g, j)
    return d.omega0 + 2.0 * d.alpha * g.t[j]


def shorthand_delta(s: TlsParams, d: ChirpDrive, g: PeriodGrid, j: int) -> float:
    """The grid-point detuning delta_j = Delta - omega0 - 2*alpha*t_j."""
    _check_index(g, j)
    return s.delta - d.omega0 - 2.0 * d.alpha * g.t[j]
