import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from mqdiscord.exceptions import DomainError
from mqdiscord.state import (
    I_Z,
    DimerParams,
    DipolarGeometry,
    XState,
    check_density_matrix,
    dimer_state,
    dipolar_coupling,
    evolve,
    evolve_unitary_oracle,
    heat_operator,
    mq_hamiltonian,
    thermal_state,
)

import oracles

betas = st.floats(min_value=0.0, max_value=50.0)
phases = st.floats(min_value=0.0, max_value=2 * math.pi)


class TestDipolarCoupling:
    def test_magic_angle_vanishes(self):
        geom = DipolarGeometry(gamma=2.7, r12=1.3, theta12=math.acos(1 / math.sqrt(3)))
        assert abs(dipolar_coupling(geom)) < 1e-15

    def test_perpendicular(self):
        assert dipolar_coupling(DipolarGeometry(1.0, 1.0, math.pi / 2)) == pytest.approx(1.0, abs=1e-15)

    def test_parallel(self):
        assert dipolar_coupling(DipolarGeometry(1.0, 2.0, 0.0)) == pytest.approx(-0.25, abs=1e-15)

    def test_symbolic(self):
        import sympy
        g, r, th = sympy.symbols("gamma r theta", positive=True)
        expr = g / r**3 * (1 - 3 * sympy.cos(th) ** 2)
        assert float(expr.subs({g: 1, r: 2, th: 0})) == dipolar_coupling(DipolarGeometry(1.0, 2.0, 0.0))

    @pytest.mark.parametrize("r12", [0.0, -1.0])
    def test_nonpositive_distance(self, r12):
        with pytest.raises(DomainError):
            DipolarGeometry(1.0, r12, 0.3)


class TestThermalState:
    def test_infinite_temperature(self):
        assert_allclose(thermal_state(0.0).matrix(), np.eye(4) / 4, atol=1e-15)

    def test_ground_state(self):
        assert_allclose(thermal_state(50.0).matrix(), np.diag([1, 0, 0, 0]), atol=1e-12)

    def test_beta_2(self):
        # exp(2 I_z)/Tr by dense matrix exponential
        assert thermal_state(2.0).r11 == pytest.approx(0.775803492574376, abs=1e-14)
        assert_allclose(thermal_state(2.0).matrix(), oracles.thermal_matrix(2.0), atol=1e-15)

    @given(betas)
    def test_matches_matrix_exponential(self, beta):
        assert_allclose(thermal_state(beta).matrix(), oracles.thermal_matrix(beta), atol=1e-14)

    def test_negative_beta(self):
        with pytest.raises(DomainError):
            thermal_state(-0.1)


class TestEvolve:
    def test_tau_zero_is_identity(self):
        rho0 = thermal_state(1.3)
        out = evolve(rho0, DimerParams(beta=1.3, tau=0.0))
        assert_allclose(out.matrix(), rho0.matrix(), atol=1e-15)

    def test_quarter_turn(self):
        p = DimerParams(beta=2.0, tau=math.pi / 2)
        out = dimer_state(p)
        z = 2 * (1 + math.cosh(2.0))
        assert out.r11 == pytest.approx(math.cosh(2.0) / z, abs=1e-12)
        assert out.r44 == pytest.approx(math.cosh(2.0) / z, abs=1e-12)
        assert out.r14 == pytest.approx(1j * math.sinh(2.0) / z, abs=1e-12)
        # frozen from the matrix-exponential oracle
        assert out.r11 == pytest.approx(0.3950064145964935, abs=1e-12)
        assert abs(out.r14 - 0.3807970779778824j) < 1e-12
        assert_allclose(out.matrix(), oracles.evolved_matrix(2.0, math.pi / 2), atol=1e-12)

    @settings(max_examples=50)
    @given(st.floats(0.0, 5.0), phases)
    def test_closed_form_matches_verbatim_formula(self, beta, phase):
        ref = np.array(oracles.eq_state(beta, phase), dtype=complex)
        assert_allclose(dimer_state(DimerParams(beta=beta, tau=phase)).matrix(), ref, atol=1e-13)

    def test_grid_against_unitary_oracle(self):
        for beta in np.linspace(0, 5, 20):
            rho0 = thermal_state(beta)
            for phase in np.linspace(0, 2 * np.pi, 20):
                p = DimerParams(beta=beta, tau=phase)
                closed = dimer_state(p).matrix()
                assert np.abs(closed - evolve(rho0, p).matrix()).max() <= 1e-12
                assert np.abs(closed - evolve_unitary_oracle(rho0.matrix(), p)).max() <= 1e-12

    @given(betas, phases)
    def test_density_matrix_invariants(self, beta, phase):
        m = dimer_state(DimerParams(beta=beta, tau=phase)).matrix()
        check_density_matrix(m)

    @given(betas, phases, phases)
    def test_purity_conserved(self, beta, phase_a, phase_b):
        ma = dimer_state(DimerParams(beta=beta, tau=phase_a)).matrix()
        mb = dimer_state(DimerParams(beta=beta, tau=phase_b)).matrix()
        assert abs(np.trace(ma @ ma) - np.trace(mb @ mb)) <= 1e-12

    @given(st.floats(40.0, 1e3), phases)
    def test_pure_limit(self, beta, phase):
        m = dimer_state(DimerParams(beta=beta, tau=phase)).matrix()
        assert np.abs(m @ m - m).max() <= 1e-10

    def test_coupling_and_tau_enter_as_product(self):
        a = dimer_state(DimerParams(beta=1.0, coupling=2.0, tau=0.35)).matrix()
        b = dimer_state(DimerParams(beta=1.0, coupling=0.5, tau=1.4)).matrix()
        assert_allclose(a, b, atol=1e-15)

    def test_xi(self):
        assert DimerParams(beta=1.0, coupling=2.0, tau=1.0).xi == pytest.approx(abs(math.cos(2.0)))
        assert DimerParams.from_xi(1.0, 0.3).xi == 0.3
        assert math.isclose(abs(math.cos(DimerParams.from_xi(1.0, 0.3).phase)), 0.3)


class TestUnitaryOracle:
    def test_tau_zero(self):
        rho = thermal_state(0.7).matrix()
        assert_allclose(evolve_unitary_oracle(rho, DimerParams(beta=0.7)), rho, atol=1e-15)

    def test_liouville_residual(self):
        # i d rho/d tau = [H, rho] by a central difference at (beta, D tau) = (1, 0.7)
        h = 1e-5
        rho0 = thermal_state(1.0).matrix()
        plus = evolve_unitary_oracle(rho0, DimerParams(beta=1.0, tau=0.7 + h))
        minus = evolve_unitary_oracle(rho0, DimerParams(beta=1.0, tau=0.7 - h))
        rho = evolve_unitary_oracle(rho0, DimerParams(beta=1.0, tau=0.7))
        ham = mq_hamiltonian(1.0)
        residual = 1j * (plus - minus) / (2 * h) - (ham @ rho - rho @ ham)
        assert np.abs(residual).max() <= 1e-7

    def test_hamiltonian_only_couples_corners(self):
        ham = mq_hamiltonian(2.0)
        expected = np.zeros((4, 4))
        expected[0, 3] = expected[3, 0] = 1.0
        assert_allclose(ham, expected, atol=0)


class TestHeatOperator:
    def test_tau_zero(self):
        assert_allclose(heat_operator(DimerParams(beta=1.0)), np.diag([1, 0, 0, -1]), atol=0)

    @given(phases)
    def test_spectrum_and_trace(self, phase):
        h = heat_operator(DimerParams(beta=1.0, tau=phase))
        assert_allclose(h, h.conj().T, atol=0)
        assert abs(np.trace(h)) <= 1e-15
        assert_allclose(np.linalg.eigvalsh(h), [-1, 0, 0, 1], atol=1e-12)

    @given(phases)
    def test_matches_conjugated_iz(self, phase):
        u = oracles.expm(-1j * phase * oracles.H_UNIT)
        assert_allclose(heat_operator(DimerParams(beta=0.0, tau=phase)), u @ I_Z @ u.conj().T, atol=1e-13)

    @given(st.floats(0.0, 20.0), phases)
    def test_corner_product(self, beta, phase):
        p = DimerParams(beta=beta, tau=phase)
        product = dimer_state(p).r14 * heat_operator(p)[3, 0]
        assert abs(product - 0.5 * math.tanh(beta / 2) * math.sin(phase) ** 2) <= 1e-12


class TestXState:
    def test_rejects_bad_trace(self):
        with pytest.raises(DomainError):
            XState(0.5, 0.5, 0.5, 0.0, 0j)

    def test_rejects_non_positive(self):
        with pytest.raises(DomainError):
            XState(0.25, 0.25, 0.25, 0.25, 0.3j)

    def test_round_trip_matrix(self):
        s = dimer_state(DimerParams(beta=1.5, tau=0.4))
        assert XState.from_matrix(s.matrix()) == s

    def test_check_density_matrix_rejects(self):
        with pytest.raises(DomainError):
            check_density_matrix(np.diag([1.2, -0.2, 0, 0]))
        with pytest.raises(DomainError):
            check_density_matrix(np.eye(3) / 3)

