"""Self-check suite: every closed form against its oracle, plus structural invariants.

Functions are looked up through their modules at call time so that a patched
implementation is what gets checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import xlogy

from . import coherence, discord, entanglement, state


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _grid(lo, hi, n):
    return np.linspace(lo, hi, n)


def _params(beta, phase):
    return state.DimerParams(beta=beta, coupling=1.0, tau=phase)


def check_evolution(n):
    worst = 0.0
    for beta in _grid(0, 5, n):
        rho0 = state.thermal_state(beta)
        for phase in _grid(0, 2 * np.pi, n):
            p = _params(beta, phase)
            closed = state.dimer_state(p).matrix()
            worst = max(worst,
                        np.abs(closed - state.evolve(rho0, p).matrix()).max(),
                        np.abs(closed - state.evolve_unitary_oracle(rho0.matrix(), p)).max())
    return worst <= 1e-12, f"max |closed - oracle| = {worst:.3g} on {n}x{n} grid"


def check_state_validity(n):
    worst_herm = worst_trace = worst_purity = 0.0
    min_eig = np.inf
    for beta in _grid(0, 50, n):
        purity0 = None
        for phase in _grid(0, 2 * np.pi, n):
            m = state.dimer_state(_params(beta, phase)).matrix()
            worst_herm = max(worst_herm, np.abs(m - m.conj().T).max())
            worst_trace = max(worst_trace, abs(np.trace(m) - 1))
            min_eig = min(min_eig, np.linalg.eigvalsh(m).min())
            purity = np.trace(m @ m).real
            purity0 = purity if purity0 is None else purity0
            worst_purity = max(worst_purity, abs(purity - purity0))
    ok = worst_herm <= 1e-12 and worst_trace <= 1e-12 and min_eig >= -1e-12 and worst_purity <= 1e-12
    return ok, (f"hermiticity {worst_herm:.3g}, trace {worst_trace:.3g}, "
                f"min eigenvalue {min_eig:.3g}, purity drift {worst_purity:.3g}")


def check_pure_limit(n):
    worst = 0.0
    for beta in (40.0, 50.0):
        for phase in _grid(0, 2 * np.pi, n):
            m = state.dimer_state(_params(beta, phase)).matrix()
            worst = max(worst, np.abs(m @ m - m).max())
    return worst <= 1e-10, f"max |rho^2 - rho| = {worst:.3g} at beta >= 40"


def check_heat_operator(n):
    worst = 0.0
    ref = np.array([-1.0, 0.0, 0.0, 1.0])
    for phase in _grid(0, 2 * np.pi, n):
        h = state.heat_operator(_params(1.0, phase))
        worst = max(worst, np.abs(np.linalg.eigvalsh(h) - ref).max(), abs(np.trace(h)))
    return worst <= 1e-12, f"spectrum deviation from I_z = {worst:.3g}"


def check_entropy_identity(n):
    betas = _grid(0, 50, n)
    lhs = np.array([np.sum(xlogy(lam, lam)) / math.log(2)
                    for lam in (discord.spectrum(b).as_array() for b in betas)])
    rhs = -2.0 * np.asarray(discord.omega0_closed(betas))
    worst = np.abs(lhs - rhs).max()
    return worst <= 1e-12, f"max |sum l log l + 2 Omega(0)| = {worst:.3g}"


def check_discord_identities(n):
    b, x = np.meshgrid(_grid(0, 5, n), _grid(0, 1, n), indexing="ij")
    q = np.asarray(discord.discord_closed(b, x))
    i_minus_c = (np.asarray(discord.mutual_information(b, x))
                 - np.asarray(discord.classical_correlations(b, x)))
    worst = np.abs(q - i_minus_c).max()
    at_one = np.abs(np.asarray(discord.discord_closed(_grid(0, 50, n), 1.0))).max()
    in_range = bool(np.all((q >= -1e-10) & (q <= 1 + 1e-12)))
    ok = worst <= 1e-12 and at_one <= 1e-12 and in_range
    return ok, f"|Q - (I - C)| = {worst:.3g}, max |Q(xi=1)| = {at_one:.3g}, 0 <= Q <= 1: {in_range}"


def check_discord_oracle(n):
    n = min(n, 15)
    worst = 0.0
    for beta in _grid(0, 5, n):
        for xi in _grid(0, 1, n):
            rho = state.dimer_state(state.DimerParams.from_xi(beta, xi)).matrix()
            worst = max(worst, abs(discord.discord_measurement_oracle(rho)
                                   - discord.discord_closed(beta, xi)))
    return worst <= 1e-8, f"max |closed - measurement oracle| = {worst:.3g} on {n}x{n} grid"


def check_concurrence_oracle(n):
    n = min(n, 20)
    worst = 0.0
    for beta in _grid(0, 5, n):
        for xi in _grid(0, 1, n):
            rho = state.dimer_state(state.DimerParams.from_xi(beta, xi)).matrix()
            worst = max(worst, abs(entanglement.concurrence_oracle(rho)
                                   - entanglement.concurrence_beta_xi(beta, xi)))
    return worst <= 1e-10, f"max |closed - spin-flip oracle| = {worst:.3g} on {n}x{n} grid"


def check_eta_minimum(n):
    b, x = np.meshgrid(_grid(0, 5, n), _grid(0, 1, n), indexing="ij")
    om0 = np.asarray(discord.omega(0.0, b, x))
    gap = min(float(np.min(np.asarray(discord.omega(eta, b, x)) - om0))
              for eta in _grid(0, 1, 101))
    return gap >= -1e-12, f"min over 101 eta of Omega(eta) - Omega(0) = {gap:.3g} on {n}x{n} grid"


def check_appendix(n):
    b, x = np.meshgrid(_grid(0, 5, n + 1)[1:], _grid(0, 1, n), indexing="ij")
    der = np.asarray(discord.appendix_derivative(b, x))
    ratio = np.asarray(discord.appendix_log_ratio(b, x))
    # the scale of Omega(1) near xi = 1 is 1 - tanh(beta) ~ 1e-4 at beta = 5, so
    # a 1e-6 step is truncation-limited there; 1e-8 is roundoff-limited
    h = 1e-8
    fd = (discord._omega1(b, x + h) - discord._omega1(b, x - h)) / (2 * h)
    fd_err = np.abs(fd - der).max()
    ok = bool(np.all(der <= 0)) and bool(np.all((ratio > 0) & (ratio <= 1))) and fd_err <= 1e-6
    return ok, (f"dOmega(1)/dxi <= 0 and log ratio in (0, 1] on {n}x{n} grid; "
                f"max |closed - central difference| = {fd_err:.3g}")


def check_omega_branches(n):
    betas = _grid(0, 50, n)
    coincide = np.abs(np.asarray(discord.omega1_closed(betas, 1.0))
                      - np.asarray(discord.omega0_closed(betas))).max()
    b, x = np.meshgrid(_grid(0, 20, n), _grid(0, 1, n), indexing="ij")
    closed_vs_general = max(
        np.abs(np.asarray(discord.omega1_closed(b, x)) - np.asarray(discord.omega(1.0, b, x))).max(),
        np.abs(np.asarray(discord.omega0_closed(b)) - np.asarray(discord.omega(0.0, b, x))).max())
    ok = coincide <= 1e-12 and closed_vs_general <= 1e-12
    return ok, (f"|Omega(1, b, 1) - Omega(0, b, 1)| = {coincide:.3g}, "
                f"closed vs component forms {closed_vs_general:.3g}")


def check_coherence(n):
    worst_sum = worst_sym = worst_closed = worst_mag = 0.0
    for beta in _grid(0, 10, n):
        for phase in _grid(0, 2 * np.pi, n):
            p = _params(beta, phase)
            spec = coherence.coherence_spectrum(p)
            worst_sum = max(worst_sum, abs(spec.total - math.tanh(beta / 2)))
            worst_sym = max(worst_sym, abs(spec.g_plus2 - spec.g_minus2))
            worst_closed = max(worst_closed, abs(spec.g_plus2 - coherence.g2_closed(beta, p.xi)))
    for beta, phase in ((2.0, np.pi / 2), (1.0, 0.7), (5.0, 2.9)):
        p = state.DimerParams(beta=beta, tau=phase, delta=1.3)
        for t in _grid(0, 10, 50):
            worst_mag = max(worst_mag, abs(coherence.magnetization(p, t)
                                           - coherence.magnetization_fourier(p, t)))
    ok = max(worst_sum, worst_sym, worst_closed, worst_mag) <= 1e-12
    return ok, (f"sum rule {worst_sum:.3g}, G+2 vs G-2 {worst_sym:.3g}, "
                f"closed G {worst_closed:.3g}, magnetization trace vs Fourier {worst_mag:.3g}")


def check_round_trips(n):
    worst = 0.0
    for beta in _grid(0.05, 40, n):
        xi = _grid(0, 1, n)
        back = coherence.xi_from_g(beta, coherence.g2_closed(beta, xi))
        worst = max(worst, np.abs(back - xi).max())
    for xi in _grid(0, 0.99, n):
        beta = _grid(0.01, 40, n)
        g = coherence.g2_closed(beta, xi)
        back = coherence.beta_from_g(g, xi, allow_pure=True)
        # G pins beta only while tanh(beta/2) is resolvable: |d beta / d G| ~ e^beta
        worst = max(worst, np.abs(coherence.g2_closed(back, xi) - g).max(),
                    np.abs(back - beta)[beta <= 12].max())
    return worst <= 1e-10, f"max round-trip error {worst:.3g} (beta compared up to 12)"


def check_concurrence_forms(n):
    worst = 0.0
    for beta in _grid(0.05, 10, n):
        xi = _grid(0, 0.999, n)
        g = np.asarray(coherence.g2_closed(beta, xi))
        c1 = np.asarray(entanglement.concurrence_beta_xi(beta, xi, clamp=False))
        c2 = np.asarray(entanglement.concurrence_beta_g(beta, g, clamp=False))
        c3 = np.asarray(entanglement.concurrence_g_xi(g, xi, clamp=False))
        # the (beta, G) form loses the xi sign information only through sqrt
        worst = max(worst, np.abs(c1 - c2).max(), np.abs(c1 - c3).max())
    return worst <= 1e-10, f"max pairwise disagreement {worst:.3g}"


def check_witness(n):
    xi = coherence.xi_from_g(1.0, 0.1)
    q = discord.discord_closed(1.0, xi)
    c = entanglement.concurrence_beta_g(1.0, 0.1)
    return (c == 0.0 and q > 0.01), f"at (beta, G) = (1, 0.1): Q = {q:.6f}, C = {c:.6f}"


CHECKS: list[tuple[str, Callable[[int], tuple[bool, str]]]] = [
    ("evolution closed form = rotation = matrix exponential", check_evolution),
    ("evolved state Hermitian, unit trace, PSD, purity conserved", check_state_validity),
    ("pure-state limit rho^2 = rho", check_pure_limit),
    ("heat operator spectrum", check_heat_operator),
    ("sum lambda log2 lambda = -2 Omega(0)", check_entropy_identity),
    ("discord Q = I - C, bounds, Q(xi=1) = 0", check_discord_identities),
    ("discord closed form vs measurement oracle", check_discord_oracle),
    ("concurrence closed form vs spin-flip oracle", check_concurrence_oracle),
    ("Omega(0) minimal over continuous eta", check_eta_minimum),
    ("Omega(1) non-increasing in xi", check_appendix),
    ("Omega branches coincide at xi = 1", check_omega_branches),
    ("coherence sum rule, symmetry, magnetization", check_coherence),
    ("inversion round trips", check_round_trips),
    ("concurrence parameterizations agree", check_concurrence_forms),
    ("discord without entanglement", check_witness),
]


def run_checks(grid_density: int = 100) -> list[CheckResult]:
    if grid_density < 4:
        raise ValueError("grid density must be at least 4")
    results = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn(grid_density)
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail))
    return results
