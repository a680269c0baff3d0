"""Exact SU(2)/SO(3) algebra for Bloch-vector evolution.

A Hamiltonian is carried as the coefficient vector of the Pauli basis,
H = h0*1 + (h_x sx + h_y sy + h_z sz)/2.  For a constant Hamiltonian the
Bloch vector rotates about the unit axis e = h/|h| by the angle |h|*tau;
``rotation_matrix`` returns that map in its Rodrigues form and is the
reference every propagation backend must reproduce in the constant-field
limit.  ``su2_exponential`` is the corresponding 2x2 unitary, kept for
cross-validation only.

Sign convention (fixed operationally, and asserted by the test suite):
the Bloch equation is dr/dt = h x r, the unitary over a step is
U = exp(+i*theta*(e.sigma)/2) with theta = |h|*tau, and the density
matrix evolves as rho -> U^dag rho U.  All three produce the same SO(3)
map, namely ``rotation_matrix``.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PauliVector",
    "AxisAngle",
    "decompose",
    "axis_angle",
    "rotation_matrix",
    "su2_exponential",
    "so3_of_su2",
    "apply",
    "check_rotation",
    "check_bloch",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
]

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_SIGMA = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# conventional axis for a vanishing field; yields identity evolution
DEGENERATE_AXIS = np.array([1.0, 0.0, 0.0])


@dataclass(frozen=True)
class PauliVector:
    """Hamiltonian as coefficients of (1, sx, sy, sz), H = h0*1 + h.sigma/2.

    Components are angular frequencies.  h0 is zero for every Hamiltonian
    built in this package; it is kept so decompose/recompose round-trips
    are exact for arbitrary inputs.
    """

    h: np.ndarray
    h0: float = 0.0

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        if h.shape != (3,):
            raise ValueError(f"h must be a 3-vector, got shape {h.shape}")
        if not (np.all(np.isfinite(h)) and np.isfinite(self.h0)):
            raise ValueError("PauliVector components must be finite")
        object.__setattr__(self, "h", h)

    def matrix(self) -> np.ndarray:
        """The 2x2 Hermitian matrix h0*1 + h.sigma/2."""
        hx, hy, hz = self.h
        return self.h0 * np.eye(2, dtype=complex) + 0.5 * (
            hx * SIGMA_X + hy * SIGMA_Y + hz * SIGMA_Z
        )


@dataclass(frozen=True)
class AxisAngle:
    """Unit rotation axis and angle theta = E*tau (radians)."""

    axis: np.ndarray
    angle: float

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        if axis.shape != (3,):
            raise ValueError(f"axis must be a 3-vector, got shape {axis.shape}")
        norm = float(np.linalg.norm(axis))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"axis must be a unit vector, |e| = {norm!r}")
        object.__setattr__(self, "axis", axis)


def decompose(pv: PauliVector) -> tuple[float, np.ndarray]:
    """Split h into magnitude E = |h| and unit axis e = h/E.

    E = 0 is degenerate; by convention it returns e = (1, 0, 0), which
    combined with angle E*tau = 0 gives identity evolution without any
    branching at the call sites.
    """
    energy = float(np.linalg.norm(pv.h))
    if energy == 0.0:
        return 0.0, DEGENERATE_AXIS.copy()
    return energy, pv.h / energy


def axis_angle(pv: PauliVector, tau: float) -> AxisAngle:
    """Axis-angle of the Bloch rotation generated by pv over a time tau.

    The angle is always formed as E*tau before any trigonometry; together
    with the 2*sin^2(theta/2) form of 1-cos used downstream this avoids
    cancellation for small angles.
    """
    energy, axis = decompose(pv)
    return AxisAngle(axis=axis, angle=energy * tau)


def rotation_matrix(aa: AxisAngle) -> np.ndarray:
    """Rodrigues rotation matrix about aa.axis by aa.angle.

    Diagonal c + e_i^2 (1-c), off-diagonals e_i e_j (1-c) -+ e_k s.
    1 - c is evaluated as 2*sin^2(theta/2) so small angles keep full
    relative accuracy.
    """
    ex, ey, ez = aa.axis
    s = np.sin(aa.angle)
    c = np.cos(aa.angle)
    omc = 2.0 * np.sin(0.5 * aa.angle) ** 2  # 1 - c without cancellation
    return np.array(
        [
            [c + ex * ex * omc, ex * ey * omc - ez * s, ex * ez * omc + ey * s],
            [ex * ey * omc + ez * s, c + ey * ey * omc, ey * ez * omc - ex * s],
            [ex * ez * omc - ey * s, ey * ez * omc + ex * s, c + ez * ez * omc],
        ]
    )


def su2_exponential(aa: AxisAngle) -> np.ndarray:
    """2x2 unitary exp(+i*theta*(e.sigma)/2) = cos(theta/2) 1 + i sin(theta/2) e.sigma."""
    half = 0.5 * aa.angle
    ex, ey, ez = aa.axis
    esigma = ex * SIGMA_X + ey * SIGMA_Y + ez * SIGMA_Z
    return np.cos(half) * np.eye(2, dtype=complex) + 1j * np.sin(half) * esigma


def so3_of_su2(u: np.ndarray) -> np.ndarray:
    """SO(3) image of a 2x2 unitary under rho -> u^dag rho u.

    M_ab = Tr[sigma_a u^dag sigma_b u] / 2, the unique real 3x3 matrix
    with u sigma_a u^dag = sum_b M_ab sigma_b.  For u = su2_exponential(aa)
    this reproduces rotation_matrix(aa); the test suite checks that
    entrywise.
    """
    udag = u.conj().T
    m = np.empty((3, 3))
    for a in range(3):
        for b in range(3):
            m[a, b] = 0.5 * np.trace(_SIGMA[a] @ udag @ _SIGMA[b] @ u).real
    return m


def apply(m: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Evolve a Bloch vector by one rotation: r -> m @ r."""
    return np.asarray(m) @ np.asarray(r, dtype=float)


def check_rotation(m: np.ndarray, tol: float = 1e-12) -> None:
    """Raise if m is not orthogonal with det +1 within tol."""
    m = np.asarray(m)
    if m.shape != (3, 3):
        raise ValueError(f"rotation matrix must be 3x3, got {m.shape}")
    defect = float(np.max(np.abs(m.T @ m - np.eye(3))))
    if defect > tol:
        raise ValueError(f"matrix not orthogonal: max |M^T M - 1| = {defect:.3e}")
    det = float(np.linalg.det(m))
    if abs(det - 1.0) > tol:
        raise ValueError(f"matrix not special: det = {det!r}")


def check_bloch(r: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Validate a Bloch vector: finite 3-vector with |r| <= 1 + tol."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValueError(f"Bloch vector must be a 3-vector, got shape {r.shape}")
    if not np.all(np.isfinite(r)):
        raise ValueError("Bloch vector components must be finite")
    norm = float(np.linalg.norm(r))
    if norm > 1.0 + tol:
        raise ValueError(f"unphysical Bloch vector: |r| = {norm!r}")
    return r
