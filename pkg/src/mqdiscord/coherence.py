"""Multiple-quantum coherence orders and intensities of the dimer.

A matrix element between I_z eigenstates with magnetic numbers ``M_i`` and
``M_j`` belongs to coherence order ``k = M_i - M_j``: it picks up the phase
``exp(-i k Delta t)`` under free evolution ``exp(-i Delta I_z t)``.  The
intensity of order k is the trace ``Tr(rho_k rho_ht_{-k})``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import expm

from .exceptions import DomainError
from .state import I_Z, DimerParams, dimer_state, half_tanh, heat_operator, mq_hamiltonian

# magnetic quantum number of |00>, |01>, |10>, |11>
M_VALUES = np.array([1, 0, 0, -1])
ORDERS = (-2, -1, 0, 1, 2)

EDGE_TOL = 1e-12


@dataclass(frozen=True)
class CoherenceSpectrum:
    g_minus2: float
    g_0: float
    g_plus2: float
    tau: float
    beta: float

    @property
    def total(self) -> float:
        return self.g_minus2 + self.g_0 + self.g_plus2


def coherence_decompose(m: NDArray) -> dict[int, NDArray[np.complex128]]:
    """Split a 4x4 matrix into its coherence-order parts.

    Returns a part for every order -2..2; the parts have disjoint support
    and sum to ``m``.  States of the MQ dimer only populate orders 0 and +-2.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise DomainError(f"expected a 4x4 matrix, got shape {m.shape}")
    order = M_VALUES[:, None] - M_VALUES[None, :]
    return {k: np.where(order == k, m, 0) for k in ORDERS}


def intensity(k: int, params: DimerParams) -> float:
    """``G_k = Tr(rho_k rho_ht_{-k})`` for the evolved thermal state."""
    if k not in (-2, 0, 2):
        raise DomainError(f"the dimer carries coherence orders -2, 0, 2 only; got {k}")
    rho = coherence_decompose(dimer_state(params).matrix())
    ht = coherence_decompose(heat_operator(params))
    return float(np.trace(rho[k] @ ht[-k]).real)


def coherence_spectrum(params: DimerParams) -> CoherenceSpectrum:
    return CoherenceSpectrum(
        g_minus2=intensity(-2, params), g_0=intensity(0, params),
        g_plus2=intensity(2, params), tau=params.tau, beta=params.beta,
    )


def g2_closed(beta, xi):
    """Second-order intensity ``tanh(beta/2) (1 - xi^2) / 2``."""
    beta = np.asarray(beta, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if np.any(np.isnan(beta)) or np.any(beta < 0):
        raise DomainError(f"beta must be >= 0, got {beta}")
    if np.any(xi < 0) or np.any(xi > 1):
        raise DomainError(f"xi must lie in [0, 1], got {xi}")
    value = 0.5 * half_tanh(beta) * (1.0 - xi * xi)
    return float(value) if value.ndim == 0 else value


def magnetization(params: DimerParams, t: float | None = None) -> float:
    """Longitudinal magnetization after the mixing period, ``Tr(rho(tau, t) I_z)``.

    The full preparation / evolution / mixing product is built from dense
    matrix exponentials.
    """
    t = params.t_evolution if t is None else t
    h = mq_hamiltonian(params.coupling)
    prep = expm(-1j * h * params.tau)
    free = expm(-1j * params.delta * t * I_Z)
    total = prep.conj().T @ free @ prep
    rho0 = expm(params.beta * I_Z) if math.isfinite(params.beta) else np.diag([1, 0, 0, 0])
    rho0 = rho0 / np.trace(rho0)
    rho = total @ rho0 @ total.conj().T
    return float(np.trace(rho @ I_Z).real)


def magnetization_fourier(params: DimerParams, t: float | None = None) -> float:
    """``sum_k exp(-i k Delta t) G_k`` over the orders present in the dimer."""
    t = params.t_evolution if t is None else t
    total = sum(np.exp(-1j * k * params.delta * t) * intensity(k, params) for k in (-2, 0, 2))
    return float(np.real(total))


def xi_from_g(beta, g):
    """Invert the second-order intensity at fixed inverse temperature.

    Admissible range is ``0 <= g <= tanh(beta/2)/2``; radicands within
    ``EDGE_TOL`` below zero are clamped.
    """
    beta = np.asarray(beta, dtype=float)
    g = np.asarray(g, dtype=float)
    g_max = 0.5 * half_tanh(beta)
    if np.any(beta < 0) or np.any(np.isnan(beta)):
        raise DomainError(f"beta must be >= 0, got {beta}")
    if np.any(g < 0) or np.any(g > g_max + EDGE_TOL):
        raise DomainError(
            f"G must lie in [0, {float(np.min(g_max)):.12g}] at beta = {beta}, got {g}")
    with np.errstate(divide="ignore", invalid="ignore"):
        radicand = np.where(g_max > 0, 1.0 - g / g_max, 1.0)
    if np.any(radicand < -EDGE_TOL):
        raise DomainError(f"G = {g} exceeds tanh(beta/2)/2")
    value = np.sqrt(np.clip(radicand, 0.0, 1.0))
    return float(value) if value.ndim == 0 else value


def beta_from_g(g, xi, allow_pure: bool = False):
    """Inverse temperature ``2 atanh(2g / (1 - xi^2))`` that yields intensity ``g``.

    Admissible range is ``0 <= g < (1 - xi^2)/2``.  An argument within
    ``EDGE_TOL`` of 1 is the pure-state limit: it returns ``inf`` when
    ``allow_pure`` is set and raises otherwise.
    """
    g = np.asarray(g, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0) or np.any(xi > 1):
        raise DomainError(f"xi must lie in [0, 1], got {xi}")
    g_max = 0.5 * (1.0 - xi * xi)
    if np.any(g < 0):
        raise DomainError(f"G must be >= 0, got {g}")
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = np.where(g_max > 0, g / g_max, np.where(g == 0, 0.0, np.inf))
    limit = (arg >= 1.0 - EDGE_TOL) & (arg <= 1.0 + EDGE_TOL)
    if np.any(arg > 1.0 + EDGE_TOL) or (np.any(limit) and not allow_pure):
        raise DomainError(
            f"G must lie in [0, {float(np.min(g_max)):.12g}) at xi = {xi}, got {g}")
    with np.errstate(divide="ignore"):
        value = np.where(limit, np.inf, 2.0 * np.arctanh(np.clip(arg, 0.0, 1.0)))
    return float(value) if value.ndim == 0 else value
