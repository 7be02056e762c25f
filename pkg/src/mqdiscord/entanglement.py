"""Concurrence of the dimer and the entanglement / admissibility thresholds.

The concurrence is available in three parameterizations, ``(beta, xi)``,
``(beta, G)`` and ``(G, xi)``.  Each accepts ``clamp=False`` to return the
expression before ``max(0, .)`` so zero crossings can be located.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import bisect
from scipy.special import expit

from .coherence import EDGE_TOL
from .exceptions import DomainError
from .state import half_tanh

SIGMA_YY = np.array([[0, 0, 0, -1],
                     [0, 0, 1, 0],
                     [0, 1, 0, 0],
                     [-1, 0, 0, 0]], dtype=complex)

ROOT_TOL = 1e-12
SCAN_POINTS = 1000


def _finish(value, clamp):
    value = np.maximum(value, 0.0) if clamp else value
    return float(value) if np.ndim(value) == 0 else value


def concurrence_beta_xi(beta, xi, clamp: bool = True):
    """``max(0, (sqrt(1-xi^2) sinh b - 1) / (2 cosh^2(b/2)))``.

    Rewritten as ``sqrt(1-xi^2) t - (1-t^2)/2`` with ``t = tanh(b/2)``, which
    is finite at ``beta = inf``.
    """
    beta = np.asarray(beta, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if np.any(beta < 0) or np.any(xi < 0) or np.any(xi > 1):
        raise DomainError("need beta >= 0 and 0 <= xi <= 1")
    t = half_tanh(beta)
    half_sech2 = 2.0 * expit(beta) * expit(-beta)   # 1/(2 cosh^2(b/2))
    return _finish(np.sqrt(1.0 - xi * xi) * t - half_sech2, clamp)


def concurrence_beta_g(beta, g, clamp: bool = True):
    """``max(0, sqrt(2 G tanh(b/2)) - 1/(2 cosh^2(b/2)))`` for ``0 <= G <= tanh(b/2)/2``."""
    beta = np.asarray(beta, dtype=float)
    g = np.asarray(g, dtype=float)
    if np.any(beta < 0):
        raise DomainError(f"beta must be >= 0, got {beta}")
    g_max = g1_max(beta)
    if np.any(g < 0) or np.any(g > g_max + EDGE_TOL):
        raise DomainError(f"G must lie in [0, {float(np.min(g_max)):.12g}], got {g}")
    half_sech2 = 2.0 * expit(beta) * expit(-beta)
    return _finish(np.sqrt(2.0 * g * half_tanh(beta)) - half_sech2, clamp)


def concurrence_g_xi(g, xi, clamp: bool = True):
    """``max(0, 2G/sqrt(1-xi^2) + 2G^2/(1-xi^2)^2 - 1/2)``.

    ``G`` runs over ``[0, (1-xi^2)/2]``; the upper end is the pure-state limit
    where the concurrence equals ``sqrt(1-xi^2)``.
    """
    g = np.asarray(g, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0) or np.any(xi > 1):
        raise DomainError(f"xi must lie in [0, 1], got {xi}")
    s = 1.0 - xi * xi
    if np.any(g < 0) or np.any(g > 0.5 * s + EDGE_TOL):
        raise DomainError(f"G must lie in [0, (1 - xi^2)/2], got G = {g}, xi = {xi}")
    if np.any((s == 0) & (g > 0)):
        raise DomainError("xi = 1 admits only G = 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.where(s > 0, 2.0 * g / np.sqrt(s) + 2.0 * g * g / (s * s), 0.0) - 0.5
    return _finish(value, clamp)


def concurrence_oracle(rho: NDArray) -> float:
    """Spin-flip concurrence of an arbitrary two-qubit density matrix.

    The square roots of the eigenvalues of ``rho (Y x Y) rho* (Y x Y)`` are
    obtained from the Hermitian similar matrix ``sqrt(rho) rho~ sqrt(rho)``.
    """
    rho = np.asarray(rho, dtype=complex)
    w, v = np.linalg.eigh(rho)
    sqrt_rho = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    flipped = SIGMA_YY @ rho.conj() @ SIGMA_YY
    r = sqrt_rho @ flipped @ sqrt_rho
    lam = np.sqrt(np.clip(np.linalg.eigvalsh(0.5 * (r + r.conj().T)), 0.0, None))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


# -- thresholds ------------------------------------------------------------

def g1_max(beta):
    """Largest intensity reachable at inverse temperature beta."""
    return 0.5 * half_tanh(beta)


def g1_min(beta):
    """Intensity above which the state is entangled: ``1/(4 sinh b cosh^2(b/2))``."""
    beta = np.asarray(beta, dtype=float)
    if np.any(beta <= 0):
        raise DomainError("G1_min is defined for beta > 0")
    # sinh b cosh^2(b/2) = 2 sinh(b/2) cosh^3(b/2)
    with np.errstate(over="ignore"):
        value = 1.0 / (8.0 * np.sinh(beta / 2.0) * np.cosh(beta / 2.0) ** 3)
    return float(value) if value.ndim == 0 else value


def beta1_min(g):
    """Lowest inverse temperature at which intensity ``g`` is reachable: ``2 atanh(2G)``."""
    g = np.asarray(g, dtype=float)
    if np.any(g < 0) or np.any(g >= 0.5):
        raise DomainError(f"G must lie in [0, 1/2), got {g}")
    value = 2.0 * np.arctanh(2.0 * g)
    return float(value) if value.ndim == 0 else value


def unique_root(f: Callable[[float], float], lo: float, hi: float,
                points: int = SCAN_POINTS) -> float:
    """Root of ``f`` on ``(lo, hi]`` after checking there is exactly one sign change.

    Raises ``RuntimeError`` when the scan does not find exactly one.
    """
    xs = np.linspace(lo, hi, points + 1)[1:]
    fs = np.array([f(x) for x in xs])
    signs = np.sign(fs)
    changes = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    zeros = np.nonzero(fs == 0)[0]
    if len(changes) + len(zeros) != 1:
        raise RuntimeError(
            f"expected one sign change on ({lo}, {hi}], found {len(changes) + len(zeros)}")
    if len(zeros):
        return float(xs[zeros[0]])
    a, b = xs[changes[0]], xs[changes[0] + 1]
    root = bisect(f, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    if abs(f(root)) > ROOT_TOL:
        raise RuntimeError(f"bisection residual {f(root)} exceeds {ROOT_TOL}")
    return float(root)


def beta_quartic(x: float, g: float) -> float:
    """``X^4/2 + sqrt(2G) X - 1/2``, whose positive root gives tanh(beta2_min/2) = X^2."""
    return 0.5 * x**4 + math.sqrt(2.0 * g) * x - 0.5


def xi_quartic(x: float, g: float) -> float:
    """``X^4/2 - 2G X^3 - 2G^2``, whose positive root gives xi2_min = sqrt(1 - X^2)."""
    return 0.5 * x**4 - 2.0 * g * x**3 - 2.0 * g * g


def beta2_min(g: float) -> float:
    """Inverse temperature above which ``C(beta, G) > 0`` (ignoring admissibility)."""
    if not 0 < g < 0.5:
        raise DomainError(f"G must lie in (0, 1/2), got {g}")
    x = unique_root(lambda x: beta_quartic(x, g), 0.0, 1.0)
    return 2.0 * math.atanh(x * x)


def xi2_min(g: float) -> float:
    """Smallest xi at which ``C(G, xi) > 0``.

    The quartic always has one positive root X; when ``X >= 1`` the
    concurrence is positive down to xi = 0 and 0 is returned.
    """
    if not 0 < g < 0.5:
        raise DomainError(f"G must lie in (0, 1/2), got {g}")
    # f(0) < 0 and f(X) > 0 for X > 4G + 1, so the root lies below that
    hi = 4.0 * g + 1.0
    x = unique_root(lambda x: xi_quartic(x, g), 0.0, hi)
    return math.sqrt(1.0 - x * x) if x < 1.0 else 0.0


def g2_max(xi):
    """Intensity bound ``(1 - xi^2)/2`` at fixed xi (reached only as beta -> inf)."""
    xi = np.asarray(xi, dtype=float)
    value = 0.5 * (1.0 - xi * xi)
    return float(value) if value.ndim == 0 else value


def g2_min(xi):
    """Intensity above which ``C(G, xi) > 0``:
    ``((1-xi^2) sqrt(2-xi^2) - (1-xi^2)^(3/2)) / 2``."""
    xi = np.asarray(xi, dtype=float)
    s = 1.0 - xi * xi
    value = 0.5 * (s * np.sqrt(2.0 - xi * xi) - s**1.5)
    return float(value) if value.ndim == 0 else value


def xi2_max(g):
    """Largest xi at which intensity ``g`` is reachable: ``sqrt(1 - 2G)``."""
    g = np.asarray(g, dtype=float)
    if np.any(g < 0) or np.any(g > 0.5):
        raise DomainError(f"G must lie in [0, 1/2], got {g}")
    value = np.sqrt(1.0 - 2.0 * g)
    return float(value) if value.ndim == 0 else value


@dataclass(frozen=True)
class ThresholdReport:
    """Admissibility and entanglement bounds for one slice; unset fields are None."""

    beta: Optional[float] = None
    g: Optional[float] = None
    xi: Optional[float] = None
    g1_max: Optional[float] = None
    g1_min: Optional[float] = None
    beta1_min: Optional[float] = None
    beta2_min: Optional[float] = None
    g2_max: Optional[float] = None
    g2_min: Optional[float] = None
    xi2_max: Optional[float] = None
    xi2_min: Optional[float] = None

    def as_dict(self) -> dict:
        return asdict(self)


def thresholds(beta: float | None = None, g: float | None = None,
               xi: float | None = None) -> ThresholdReport:
    """Evaluate every bound that the supplied slice parameters determine."""
    fields: dict = {"beta": beta, "g": g, "xi": xi}
    if beta is not None:
        if not beta > 0:
            raise DomainError(f"beta slice must be > 0, got {beta}")
        fields["g1_max"] = float(g1_max(beta))
        fields["g1_min"] = g1_min(beta)
    if g is not None:
        if not 0 < g < 0.5:
            raise DomainError(f"G slice must lie in (0, 1/2), got {g}")
        fields["beta1_min"] = beta1_min(g)
        fields["beta2_min"] = beta2_min(g)
        fields["xi2_max"] = xi2_max(g)
        fields["xi2_min"] = xi2_min(g)
    if xi is not None:
        if not 0 <= xi < 1:
            raise DomainError(f"xi slice must lie in [0, 1), got {xi}")
        fields["g2_max"] = g2_max(xi)
        fields["g2_min"] = g2_min(xi)
    return ThresholdReport(**fields)
