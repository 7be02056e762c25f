"""Mutual information, classical correlations and quantum discord of the dimer.

All entropies are in bits with ``0 log 0 = 0``.  Two routes are provided:
closed forms in ``(beta, xi)``, and a brute-force route that minimizes the
post-measurement conditional entropy over projective measurements on spin B
of an arbitrary 4x4 density matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize_scalar
from scipy.special import entr, expit

from . import coherence
from .exceptions import DomainError
from .state import XState, half_tanh, one_minus_half_tanh

LN2 = math.log(2.0)

# Omega(1) may undercut Omega(0) only by roundoff
_BRANCH_TOL = 1e-12
_TINY = 1e-300


@dataclass(frozen=True)
class Spectrum4:
    lambda0: float
    lambda1: float
    lambda2: float
    lambda3: float

    def as_array(self) -> NDArray[np.float64]:
        return np.array([self.lambda0, self.lambda1, self.lambda2, self.lambda3])


@dataclass(frozen=True)
class MeasurementBasis:
    """Projective measurement axis on spin B, as Bloch angles."""

    theta_b: float
    phi_b: float

    def axis(self) -> NDArray[np.float64]:
        st = math.sin(self.theta_b)
        return np.array([st * math.cos(self.phi_b), st * math.sin(self.phi_b),
                         math.cos(self.theta_b)])


@dataclass(frozen=True)
class CorrelationReport:
    beta: float
    xi: float
    discord: float
    classical_correlations: float
    mutual_information: float
    entropy_a: float
    entropy_b: float
    spectrum: Spectrum4
    omega0: float
    omega1: float


def _check_domain(beta, xi=None):
    beta = np.asarray(beta, dtype=float)
    if np.any(np.isnan(beta)) or np.any(beta < 0):
        raise DomainError(f"beta must be >= 0, got {beta}")
    if xi is not None:
        xi = np.asarray(xi, dtype=float)
        if np.any(np.isnan(xi)) or np.any(xi < 0) or np.any(xi > 1):
            raise DomainError(f"xi must lie in [0, 1], got {xi}")
    return beta, xi


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def _bits(p):
    """Entropy contribution ``-p log2 p`` with ``0 log 0 = 0``."""
    return entr(p) / LN2


def _h_pm(x, one_minus_x):
    """Binary entropy of the pair ``(1 +- x)/2``; the complement is passed in
    explicitly so that it keeps full relative precision near x = 1."""
    return _bits((1.0 + x) / 2.0) + _bits(one_minus_x / 2.0)


def _logcosh(x):
    x = np.abs(x)
    return x + np.log1p(np.exp(-2.0 * x)) - LN2


def spectrum(beta: float) -> Spectrum4:
    """Eigenvalues of the evolved state; they do not depend on tau.

    ``(cosh b +- sinh b) / (2(1 + cosh b))`` equals ``expit(+-b)**2`` and
    ``1/(2(1 + cosh b))`` equals ``expit(b) expit(-b)``.
    """
    _check_domain(beta)
    up, down = float(expit(beta)), float(expit(-beta))
    mid = up * down
    return Spectrum4(up * up, down * down, mid, mid)


def reduced_entropy(beta, xi):
    """Entropy of either one-spin reduced state; populations ``(1 +- xi t)/2``."""
    beta, xi = _check_domain(beta, xi)
    t = half_tanh(beta)
    # 1 - xi t = (1 - xi) + xi (1 - t)
    return _out(_h_pm(xi * t, (1.0 - xi) + xi * one_minus_half_tanh(beta)))


def _sum_lambda_log_lambda(beta):
    up, down = expit(beta), expit(-beta)
    lam = np.stack([up * up, down * down, up * down, up * down])
    return -np.sum(_bits(lam), axis=0)


def mutual_information(beta, xi):
    """``S(A) + S(B) + sum lambda log2 lambda``."""
    beta, xi = _check_domain(beta, xi)
    s_a = reduced_entropy(beta, xi)
    value = 2.0 * np.asarray(s_a) + _sum_lambda_log_lambda(beta)
    return _out(np.where(beta == 0, 0.0, value))


def _populations(beta, xi):
    """(r11, r22, r33, r44, |r14|) of the evolved state for cos(D tau) = xi."""
    t = half_tanh(beta)
    u = one_minus_half_tanh(beta)
    mid = expit(beta) * expit(-beta)
    r11 = (1 + t) ** 2 / 4 - (1 - xi) * t / 2
    r44 = u * u / 4 + (1 - xi) * t / 2
    r14 = np.sqrt(np.clip(1.0 - xi * xi, 0.0, None)) * t / 2
    return r11, mid, mid, r44, r14


def omega(eta, beta, xi):
    """Conditional entropy of A after measuring B along an axis with ``cos(theta) = eta``.

    ``p_i`` is the outcome probability and ``theta_i`` the Bloch length of the
    conditional state of A; the result is ``p_0 S_0 + p_1 S_1``.  Any eta in
    [0, 1] is accepted; eta = 0 is an equatorial and eta = 1 a sigma_z
    measurement.
    """
    beta, xi = _check_domain(beta, xi)
    eta = np.asarray(eta, dtype=float)
    if np.any(np.isnan(eta)) or np.any(eta < 0) or np.any(eta > 1):
        raise DomainError(f"eta must lie in [0, 1], got {eta}")
    r11, r22, r33, r44, r14 = _populations(beta, xi)
    total = 0.0
    for sign in (1.0, -1.0):
        p = 0.5 * (1.0 + sign * eta * (2.0 * (r11 + r33) - 1.0))
        radicand = (1.0 - eta**2) * r14**2 + 0.25 * (
            2.0 * (r11 + r22) - 1.0 + sign * eta * (1.0 - 2.0 * (r22 + r33))) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            theta = np.where(p > 0, np.sqrt(radicand) / p, 0.0)
        theta = np.clip(theta, 0.0, 1.0)
        total = total + p * _h_pm(theta, 1.0 - theta)
    return _out(total)


def omega0_closed(beta):
    """``log2(1 + e^b) - b e^b / (ln2 (1 + e^b))``; independent of xi."""
    beta, _ = _check_domain(beta)
    return _out(np.logaddexp(0.0, beta) / LN2 - _x_expit(beta, 1.0) / LN2)


def _x_expit(beta, sign):
    """``beta * expit(sign * beta)`` with the ``inf * 0`` limit taken as 0."""
    with np.errstate(invalid="ignore"):
        v = beta * expit(sign * beta)
    return np.where(np.isinf(beta) & (sign < 0), 0.0, v)


def omega1_closed(beta, xi):
    """Conditional entropy for the sigma_z measurement (eta = 1).

    The three logarithms are those of
    ``(1+cosh b)^2 - xi^2 sinh^2 b``, ``cosh^2 b - xi^2 sinh^2 b`` and the
    ratio ``(1+cosh b - xi sinh b)(cosh b + xi sinh b) /
    ((1+cosh b + xi sinh b)(cosh b - xi sinh b))``; each is factored through
    ``t = tanh(b/2)`` and ``T = tanh b`` to stay finite and cancellation-free.
    """
    beta, xi = _check_domain(beta, xi)
    return _out(_omega1(beta, xi))


def _omega1(beta, xi):
    """Unchecked body of ``omega1_closed``; stays analytic slightly past xi = 1."""
    beta = np.asarray(beta, dtype=float)
    xi = np.asarray(xi, dtype=float)
    t = half_tanh(beta)
    tt = np.tanh(beta)
    one_m_t = one_minus_half_tanh(beta)
    one_m_tt = 2.0 * expit(-2.0 * beta)
    a_minus = (1.0 - xi) + xi * one_m_t      # 1 - xi t
    a_plus = 1.0 + xi * t
    b_minus = (1.0 - xi) + xi * one_m_tt     # 1 - xi T
    b_plus = 1.0 + xi * tt
    # log2(1 + cosh b) - w log2(cosh b) with w = cosh b/(1 + cosh b)
    #   = log2(1 + 1/cosh b) + (1 - w) log2(cosh b),  1 - w = (1 - t^2)/2
    finite = np.isfinite(beta)
    b = np.where(finite, beta, 0.0)
    weight = (1.0 + t * t) / 2.0
    sech = 2.0 * np.exp(-b) / (1.0 + np.exp(-2.0 * b))
    lead = np.log1p(sech) / LN2 + 2.0 * expit(b) * expit(-b) * _logcosh(b) / LN2
    lead = np.where(finite, lead, 0.0)
    a_minus = np.maximum(a_minus, _TINY)
    b_minus = np.maximum(b_minus, _TINY)
    first = 0.5 * (np.log2(a_minus) + np.log2(a_plus))
    second = weight * 0.5 * (np.log2(b_minus) + np.log2(b_plus))
    ratio = np.log2(a_minus) + np.log2(b_plus) - np.log2(a_plus) - np.log2(b_minus)
    third = xi * t / 2.0 * ratio
    return lead + first - second - third


def classical_correlations(beta, xi):
    """``S(A) - min(Omega(0), Omega(1))``.

    The minimum is always the eta = 0 branch; this is checked on every call
    and a violation raises ``RuntimeError``.
    """
    beta, xi = _check_domain(beta, xi)
    om0 = np.asarray(omega(0.0, beta, xi))
    om1 = np.asarray(omega(1.0, beta, xi))
    if np.any(om1 < om0 - _BRANCH_TOL):
        raise RuntimeError("Omega(1) < Omega(0): eta = 0 is not the minimizing branch")
    value = np.asarray(reduced_entropy(beta, xi)) - np.minimum(om0, om1)
    # S(A) >= Omega mathematically; clip roundoff below zero
    return _out(np.where(beta == 0, 0.0, np.clip(value, 0.0, None)))


def discord_closed(beta, xi):
    """Quantum discord of the dimer as an explicit function of ``(beta, xi)``.

    Evaluated term by term as::

        log2(1+e^b) - b/(ln2 (1+e^b)) - 1/2 log2((1+cosh b)^2 - xi^2 sinh^2 b)
            - xi sinh b / (2(1+cosh b)) * log2((1+cosh b+xi sinh b)/(1+cosh b-xi sinh b))

    with ``(1+cosh b)^2 - xi^2 sinh^2 b = (1+cosh b)^2 (1-xi t)(1+xi t)``
    and ``sinh b/(1+cosh b) = t``.  ``beta = inf`` returns the pure-state
    limit, the entanglement entropy ``h((1+xi)/2)``.
    """
    beta, xi = _check_domain(beta, xi)
    t = half_tanh(beta)
    a_minus = (1.0 - xi) + xi * one_minus_half_tanh(beta)
    a_plus = 1.0 + xi * t
    finite = np.isfinite(beta)
    b = np.where(finite, beta, 0.0)
    a_minus = np.maximum(a_minus, _TINY)
    with np.errstate(divide="ignore", invalid="ignore"):
        log2_1pc = 1.0 + 2.0 * _logcosh(b / 2.0) / LN2
        value = (np.logaddexp(0.0, b) / LN2
                 - _x_expit(b, -1.0) / LN2
                 - log2_1pc - 0.5 * np.log2(a_minus * a_plus)
                 - xi * t / 2.0 * np.log2(a_plus / a_minus))
    pure = _h_pm(xi, 1.0 - xi)
    value = np.where(finite, value, pure)
    value = np.where(beta == 0, 0.0, value)
    return _out(np.clip(value, 0.0, None))


def correlations(beta: float, xi: float) -> CorrelationReport:
    """Discord assembled as ``I - C`` from its components."""
    _check_domain(beta, xi)
    s_a = reduced_entropy(beta, xi)
    mi = mutual_information(beta, xi)
    cc = classical_correlations(beta, xi)
    return CorrelationReport(
        beta=float(beta), xi=float(xi),
        discord=mi - cc, classical_correlations=cc, mutual_information=mi,
        entropy_a=s_a, entropy_b=s_a, spectrum=spectrum(beta),
        omega0=omega(0.0, beta, xi), omega1=omega(1.0, beta, xi),
    )


def discord_beta_g(beta, g):
    """Discord at fixed inverse temperature as a function of the coherence intensity."""
    return discord_closed(beta, coherence.xi_from_g(beta, g))


def discord_g_xi(g, xi, allow_pure: bool = True):
    """Discord at fixed xi as a function of the coherence intensity.

    At ``g = (1 - xi^2)/2`` the inverse temperature is infinite and the
    pure-state limit is returned unless ``allow_pure`` is false.
    """
    return discord_closed(coherence.beta_from_g(g, xi, allow_pure=allow_pure), xi)


# -- Omega(1) decreases in xi ---------------------------------------------

def appendix_log_ratio(beta, xi):
    """Argument of the logarithm in ``d Omega(1) / d xi``.

    The raw ratio ``((1+c)c - xi^2 s^2 - xi s) / ((1+c)c - xi^2 s^2 + xi s)``
    (c = cosh b, s = sinh b) divided through by ``(1+c)^2``: numerator and
    denominator become ``(1-t^2)(1 -+ xi t) + 2 t^2 (1-xi^2)``, up to a
    common factor 1/2.
    """
    beta, xi = _check_domain(beta, xi)
    t = half_tanh(beta)
    one_m_t2 = 4.0 * expit(beta) * expit(-beta)
    cross = 2.0 * t * t * (1.0 - xi * xi)
    num = one_m_t2 * ((1.0 - xi) + xi * one_minus_half_tanh(beta)) + cross
    den = one_m_t2 * (1.0 + xi * t) + cross
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(den > 0, num / den, 1.0)
    return _out(ratio)


def appendix_derivative(beta, xi):
    """``sinh b / (2(1+cosh b)) * log2(ratio)``; never positive."""
    beta, xi = _check_domain(beta, xi)
    if np.any(beta == 0):
        raise DomainError("the derivative is defined for beta > 0")
    return _out(half_tanh(beta) / 2.0 * np.log2(appendix_log_ratio(beta, xi)))


# -- measurement oracle ----------------------------------------------------

def _entropy_2x2(a, d, b_abs2):
    """Unnormalized 2x2 Hermitian blocks -> (trace, entropy of normalized state)."""
    tr = a + d
    gap = np.sqrt((a - d) ** 2 + 4.0 * b_abs2)
    with np.errstate(invalid="ignore", divide="ignore"):
        lo = np.where(tr > 0, np.clip((tr - gap) / 2.0 / tr, 0.0, 1.0), 0.0)
    hi = 1.0 - lo
    return tr, _bits(lo) + _bits(hi)


def _conditional_entropy(rho: NDArray, theta, phi):
    """Post-measurement conditional entropy of A for axes (theta, phi) on B."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)  # [a, b, a', b']
    st = np.sin(theta)
    nx, ny, nz = st * np.cos(phi), st * np.sin(phi), np.cos(theta)
    total = 0.0
    for sign in (1.0, -1.0):
        # projector (1 + s n.sigma)/2 on B, element [b', b]
        p00 = 0.5 * (1.0 + sign * nz)
        p11 = 0.5 * (1.0 - sign * nz)
        p01 = 0.5 * sign * (nx - 1j * ny)
        p10 = np.conj(p01)
        # Tr_B[(1 x P) rho]_{a a'} = sum_{b b'} rho[a,b,a',b'] P[b',b]
        def block(i, j):
            return (r[i, 0, j, 0] * p00 + r[i, 0, j, 1] * p10
                    + r[i, 1, j, 0] * p01 + r[i, 1, j, 1] * p11)
        a, d, off = block(0, 0).real, block(1, 1).real, block(0, 1)
        prob, ent = _entropy_2x2(a, d, np.abs(off) ** 2)
        total = total + prob * ent
    return total


def _von_neumann(m: NDArray) -> float:
    w = np.linalg.eigvalsh(m)
    return float(np.sum(_bits(np.clip(w, 0.0, 1.0))))


def minimize_conditional_entropy(rho: NDArray, grid: int = 64,
                                 xatol: float = 1e-10) -> tuple[float, MeasurementBasis]:
    """Minimal measured conditional entropy of A over projective measurements on B.

    A ``grid x grid`` scan of the Bloch sphere is followed by bounded scalar
    minimization in each angle around the best grid point, repeated until the
    value stops improving.
    """
    rho = np.asarray(rho, dtype=complex)
    thetas = np.linspace(0.0, np.pi, grid)
    phis = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    tg, pg = np.meshgrid(thetas, phis, indexing="ij")
    values = _conditional_entropy(rho, tg, pg)
    i, j = np.unravel_index(np.argmin(values), values.shape)
    theta, phi, best = thetas[i], phis[j], values[i, j]
    d_theta, d_phi = np.pi / (grid - 1), 2.0 * np.pi / grid
    opts = {"xatol": xatol, "maxiter": 500}

    for _ in range(4):
        start = best
        res = minimize_scalar(lambda x: float(_conditional_entropy(rho, x, phi)),
                              bounds=(max(theta - d_theta, 0.0), min(theta + d_theta, np.pi)),
                              method="bounded", options=opts)
        if res.fun < best:
            theta, best = res.x, res.fun
        res = minimize_scalar(lambda x: float(_conditional_entropy(rho, theta, x)),
                              bounds=(phi - d_phi, phi + d_phi),
                              method="bounded", options=opts)
        if res.fun < best:
            phi, best = res.x, res.fun
        if start - best <= 1e-15:
            break
    return float(best), MeasurementBasis(float(theta), float(phi % (2.0 * np.pi)))


def discord_measurement_oracle(state: XState | NDArray, grid: int = 64) -> float:
    """Discord ``S(B) - S(AB) + min conditional entropy`` of any two-qubit state."""
    rho = state.matrix() if isinstance(state, XState) else np.asarray(state, dtype=complex)
    r = rho.reshape(2, 2, 2, 2)
    rho_b = np.einsum("ijik->jk", r)
    min_cond, _ = minimize_conditional_entropy(rho, grid=grid)
    return _von_neumann(rho_b) - _von_neumann(rho) + min_cond
