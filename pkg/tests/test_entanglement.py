import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mqdiscord.coherence import g2_closed
from mqdiscord.entanglement import (
    beta1_min,
    beta2_min,
    beta_quartic,
    concurrence_beta_g,
    concurrence_beta_xi,
    concurrence_g_xi,
    concurrence_oracle,
    g1_max,
    g1_min,
    g2_max,
    g2_min,
    thresholds,
    unique_root,
    xi2_max,
    xi2_min,
    xi_quartic,
)
from mqdiscord.exceptions import DomainError
from mqdiscord.state import DimerParams, dimer_state

unit = st.floats(min_value=0.0, max_value=1.0)


class TestConcurrence:
    @given(st.floats(0.0, 30.0), unit)
    def test_three_forms_agree(self, beta, xi):
        g = g2_closed(beta, xi)
        c = concurrence_beta_xi(beta, xi, clamp=False)
        assert abs(concurrence_beta_g(beta, g, clamp=False) - c) <= 1e-12
        if xi < 1 and beta > 0:
            assert abs(concurrence_g_xi(g, xi, clamp=False) - c) <= 1e-9

    def test_oracle_grid(self):
        worst = 0.0
        for beta in np.linspace(0, 5, 20):
            for xi in np.linspace(0, 1, 20):
                rho = dimer_state(DimerParams.from_xi(beta, xi)).matrix()
                worst = max(worst, abs(concurrence_oracle(rho) - concurrence_beta_xi(beta, xi)))
        assert worst <= 1e-10

    def test_raw_value_frozen(self):
        # sqrt(2 G tanh(1/2)) - 1/(2 cosh^2(1/2)) at G = 0.1
        assert concurrence_beta_g(1.0, 0.1, clamp=False) == pytest.approx(
            -0.08921164394577367, abs=1e-14)
        assert concurrence_beta_g(1.0, 0.1) == 0.0

    def test_pure_limit(self):
        assert concurrence_beta_xi(40.0, 0.0) == pytest.approx(1.0, abs=1e-12)
        assert concurrence_beta_xi(math.inf, 0.6) == pytest.approx(0.8, abs=1e-15)
        assert concurrence_g_xi(0.32, 0.6) == pytest.approx(0.8, abs=1e-12)

    def test_bell_and_product_oracle(self):
        psi = np.array([1, 0, 0, 1]) / math.sqrt(2)
        assert concurrence_oracle(np.outer(psi, psi)) == pytest.approx(1.0, abs=1e-12)
        assert concurrence_oracle(np.eye(4) / 4) == 0.0

    @given(st.floats(0.0, 30.0), unit)
    def test_range(self, beta, xi):
        assert 0.0 <= concurrence_beta_xi(beta, xi) <= 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            concurrence_beta_g(1.0, 0.3)
        with pytest.raises(DomainError):
            concurrence_g_xi(0.2, 1.0)
        with pytest.raises(DomainError):
            concurrence_beta_xi(-1.0, 0.2)


class TestThresholds:
    def test_g1(self):
        np.testing.assert_allclose(g1_max(np.array([1.0, 2.0, 5.0])),
                                   [0.23106, 0.38080, 0.49331], atol=1e-5)
        np.testing.assert_allclose([g1_min(b) for b in (1.0, 2.0, 5.0)],
                                   [0.1673, 0.02895, 8.96e-5], rtol=1e-3)

    @given(st.floats(0.05, 30.0))
    def test_g1_min_is_zero_crossing(self, beta):
        g = g1_min(beta)
        if g <= g1_max(beta):
            assert abs(concurrence_beta_g(beta, g, clamp=False)) <= 1e-12

    def test_beta1_min(self):
        np.testing.assert_allclose([beta1_min(g) for g in (0.1, 0.25, 0.4)],
                                   [math.log(1.5), math.log(3), math.log(9)], atol=1e-14)

    def test_beta2_min(self):
        b = beta2_min(0.1)
        assert b == pytest.approx(1.29474, abs=1e-5)
        assert abs(concurrence_beta_g(b, 0.1, clamp=False)) <= 1e-12

    @pytest.mark.parametrize("g", [0.1, 0.25, 0.4])
    def test_entanglement_condition(self, g):
        # entangled above beta2_min; when beta2_min < beta1_min every admissible beta is
        b1, b2 = beta1_min(g), beta2_min(g)
        assert concurrence_beta_g(max(b1, b2) * 1.01, g, clamp=False) > 0
        if b2 * 0.99 >= b1:
            assert concurrence_beta_g(b2 * 0.99, g, clamp=False) < 0
        else:
            assert concurrence_beta_g(b1, g, clamp=False) > 0

    def test_g2(self):
        xs = [0.9, math.sqrt(0.5), 0.0]
        np.testing.assert_allclose(g2_max(np.array(xs)), [0.095, 0.25, 0.5], atol=1e-12)
        np.testing.assert_allclose([g2_min(x) for x in xs], [0.06222, 0.12941, 0.20711], atol=1e-5)
        for x in xs:
            assert abs(concurrence_g_xi(g2_min(x), x, clamp=False)) <= 1e-12

    def test_xi2(self):
        np.testing.assert_allclose([xi2_max(g) for g in (0.1, 0.25, 0.4)],
                                   [0.894427, 0.707107, 0.447214], atol=1e-6)
        x = xi2_min(0.1)
        assert x == pytest.approx(0.80564, abs=1e-5)
        assert abs(concurrence_g_xi(0.1, x, clamp=False)) <= 1e-12
        # large G: entangled for every xi
        assert xi2_min(0.4) == 0.0

    @pytest.mark.parametrize("g", [0.01, 0.1, 0.25, 0.4, 0.49])
    def test_quartics_have_unique_roots(self, g):
        unique_root(lambda x: beta_quartic(x, g), 0.0, 1.0)
        unique_root(lambda x: xi_quartic(x, g), 0.0, 4 * g + 1)

    def test_unique_root_rejects_two_roots(self):
        with pytest.raises(RuntimeError):
            unique_root(lambda x: (x - 0.3) * (x - 0.7), 0.0, 1.0)

    def test_report(self):
        rep = thresholds(beta=2.0, g=0.1, xi=0.9)
        d = rep.as_dict()
        assert d["g1_max"] == pytest.approx(0.3808, abs=1e-4)
        assert d["xi2_min"] == pytest.approx(0.80564, abs=1e-5)
        assert d["g2_min"] == pytest.approx(0.06222, abs=1e-5)
        assert thresholds(beta=1.0).xi2_min is None

    def test_report_domain(self):
        with pytest.raises(DomainError):
            thresholds(g=0.6)
        with pytest.raises(DomainError):
            thresholds(xi=1.0)
