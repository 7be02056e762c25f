"""Thermal two-spin dimer state and its evolution under the MQ Hamiltonian.

Basis order is fixed as |00>, |01>, |10>, |11> with |0> the I_z = +1/2
eigenstate.  hbar = k = 1; the only physical combinations are the inverse
temperature ``beta`` and the phases ``D*tau`` and ``Delta*t``.

The MQ Hamiltonian ``(D/2)(I1+ I2+ + I1- I2-)`` couples only |00> and |11>,
so every evolution here reduces to a 2x2 rotation in that block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import expm
from scipy.special import expit

from .exceptions import DomainError

PSD_TOL = 1e-12

# single-spin operators (|0> = spin up)
SZ = np.array([[0.5, 0], [0, -0.5]], dtype=complex)
S_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
S_MINUS = S_PLUS.T.copy()
ID2 = np.eye(2, dtype=complex)

I_Z = np.kron(SZ, ID2) + np.kron(ID2, SZ)


@dataclass(frozen=True)
class DipolarGeometry:
    gamma: float
    r12: float
    theta12: float

    def __post_init__(self):
        if not self.r12 > 0:
            raise DomainError(f"r12 must be positive, got {self.r12}")


def dipolar_coupling(geom: DipolarGeometry) -> float:
    """Dipolar coupling ``gamma/r^3 (1 - 3 cos^2 theta)`` with hbar = 1."""
    if not geom.r12 > 0:
        raise DomainError(f"r12 must be positive, got {geom.r12}")
    return geom.gamma / geom.r12**3 * (1.0 - 3.0 * math.cos(geom.theta12) ** 2)


@dataclass(frozen=True)
class DimerParams:
    """Parameters of one MQ NMR run on a dimer.

    ``beta`` may be ``math.inf`` (pure-state limit).  ``xi = |cos(D tau)|``
    collapses the (D, tau) dependence of every closed form.
    """

    beta: float
    coupling: float = 1.0
    tau: float = 0.0
    delta: float = 1.0
    t_evolution: float = 0.0
    # exact |cos(D tau)| when constructed from xi; avoids cos(acos(x)) roundoff
    xi_exact: Optional[float] = field(default=None, repr=False)

    def __post_init__(self):
        if math.isnan(self.beta) or self.beta < 0:
            raise DomainError(f"beta must be >= 0, got {self.beta}")
        for name in ("coupling", "tau", "delta", "t_evolution"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")

    @classmethod
    def from_xi(cls, beta: float, xi: float, delta: float = 1.0,
                t_evolution: float = 0.0) -> "DimerParams":
        """Unit coupling with ``tau = arccos(xi)`` so that ``|cos(D tau)| = xi``."""
        if not 0.0 <= xi <= 1.0:
            raise DomainError(f"xi must lie in [0, 1], got {xi}")
        return cls(beta=beta, coupling=1.0, tau=math.acos(xi), delta=delta,
                   t_evolution=t_evolution, xi_exact=float(xi))

    @property
    def phase(self) -> float:
        """The preparation phase D*tau."""
        return self.coupling * self.tau

    @property
    def xi(self) -> float:
        if self.xi_exact is not None:
            return self.xi_exact
        return min(abs(math.cos(self.phase)), 1.0)


@dataclass(frozen=True)
class XState:
    """X-shaped two-qubit state with a vanishing (2,3) coherence."""

    r11: float
    r22: float
    r33: float
    r44: float
    r14: complex

    def __post_init__(self):
        total = self.r11 + self.r22 + self.r33 + self.r44
        if abs(total - 1.0) > PSD_TOL:
            raise DomainError(f"populations sum to {total}, not 1")
        if min(self.r11, self.r22, self.r33, self.r44) < -PSD_TOL:
            raise DomainError("negative population")
        if abs(self.r14) ** 2 > self.r11 * self.r44 + PSD_TOL:
            raise DomainError("|r14|^2 exceeds r11*r44; state is not positive")

    def matrix(self) -> NDArray[np.complex128]:
        m = np.diag([self.r11, self.r22, self.r33, self.r44]).astype(complex)
        m[0, 3] = self.r14
        m[3, 0] = np.conj(self.r14)
        return m

    @classmethod
    def from_matrix(cls, m: NDArray) -> "XState":
        m = np.asarray(m)
        return cls(float(m[0, 0].real), float(m[1, 1].real), float(m[2, 2].real),
                   float(m[3, 3].real), complex(m[0, 3]))


def check_density_matrix(m: NDArray, tol: float = PSD_TOL) -> None:
    """Raise ``DomainError`` unless ``m`` is a Hermitian, unit-trace, PSD 4x4 matrix."""
    m = np.asarray(m)
    if m.shape != (4, 4):
        raise DomainError(f"expected a 4x4 matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise DomainError("matrix is not Hermitian")
    if abs(np.trace(m) - 1.0) > tol:
        raise DomainError(f"trace is {np.trace(m).real}, not 1")
    if np.linalg.eigvalsh(m).min() < -tol:
        raise DomainError("matrix has a negative eigenvalue")


def half_tanh(beta):
    """``tanh(beta/2)``, valid for ``beta = inf``."""
    return np.tanh(np.asarray(beta, dtype=float) / 2.0)


def one_minus_half_tanh(beta):
    """``1 - tanh(beta/2)`` without cancellation at large beta."""
    return 2.0 * expit(-np.asarray(beta, dtype=float))


def thermal_state(beta: float) -> XState:
    """Equilibrium state ``exp(beta I_z) / Tr exp(beta I_z)``.

    It factorizes into two single-spin states with populations
    ``expit(+-beta)``, which keeps the entries finite for any beta.
    """
    if math.isnan(beta) or beta < 0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    up, down = float(expit(beta)), float(expit(-beta))
    return XState(up * up, up * down, up * down, down * down, 0j)


def evolve(state0: XState, params: DimerParams) -> XState:
    """Conjugate ``state0`` by ``exp(-i H_MQ tau)``.

    Only the {|00>, |11>} block moves: it is rotated by
    ``cos(phi/2) - i sin(phi/2) sigma_x`` with ``phi = D tau``.
    """
    half = 0.5 * params.phase
    c, s = math.cos(half), math.sin(half)
    u = np.array([[c, -1j * s], [-1j * s, c]])
    block = np.array([[state0.r11, state0.r14], [np.conj(state0.r14), state0.r44]])
    out = u @ block @ u.conj().T
    return XState(float(out[0, 0].real), state0.r22, state0.r33,
                  float(out[1, 1].real), complex(out[0, 1]))


def dimer_state(params: DimerParams) -> XState:
    """Closed-form evolved thermal state.

    Entries are ``(cosh b +- cos(phi) sinh b) / (2(1 + cosh b))`` on the
    corners, ``1/(2(1 + cosh b))`` in the middle and
    ``i sin(phi) sinh b / (2(1 + cosh b))`` at (1,4), written through
    ``t = tanh(b/2)`` so that large beta does not overflow.
    """
    t = float(half_tanh(params.beta))
    u = float(one_minus_half_tanh(params.beta))
    cos_phi, sin_phi = math.cos(params.phase), math.sin(params.phase)
    middle = float(expit(params.beta) * expit(-params.beta))
    # (1+t^2)/4 +- cos*t/2, arranged so the small corner has no cancellation
    if cos_phi >= 0:
        r11 = (1 + t) ** 2 / 4 - (1 - cos_phi) * t / 2
        r44 = u * u / 4 + (1 - cos_phi) * t / 2
    else:
        r11 = u * u / 4 + (1 + cos_phi) * t / 2
        r44 = (1 + t) ** 2 / 4 - (1 + cos_phi) * t / 2
    return XState(r11, middle, middle, r44, 0.5j * sin_phi * t)


def mq_hamiltonian(coupling: float) -> NDArray[np.complex128]:
    """``(D/2)(I1+ I2+ + I1- I2-)`` assembled from single-spin operators."""
    return 0.5 * coupling * (np.kron(S_PLUS, S_PLUS) + np.kron(S_MINUS, S_MINUS))


def evolve_unitary_oracle(rho: NDArray, params: DimerParams) -> NDArray[np.complex128]:
    """``exp(-iH tau) rho exp(iH tau)`` by a dense matrix exponential."""
    u = expm(-1j * params.tau * mq_hamiltonian(params.coupling))
    return u @ np.asarray(rho, dtype=complex) @ u.conj().T


def heat_operator(params: DimerParams) -> NDArray[np.complex128]:
    """The evolved longitudinal spin ``exp(-iH tau) I_z exp(iH tau)``."""
    cos_phi, sin_phi = math.cos(params.phase), math.sin(params.phase)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0], m[3, 3] = cos_phi, -cos_phi
    m[0, 3], m[3, 0] = 1j * sin_phi, -1j * sin_phi
    return m
