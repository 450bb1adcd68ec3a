import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from osgoodlab.modulus import Modulus
from osgoodlab.weights import (WeightCalculus, WeightDomainError, WeightOverflow,
                               closed_form_log_psi_sec4, closed_form_psi_sec4,
                               closed_form_theta_sec4)

from conftest import BUILTIN_OSGOOD

E1 = math.exp(math.e - 1)


@pytest.fixture(scope="module")
def lip():
    return WeightCalculus(Modulus.lipschitz(), 2.0, 1.0)


@pytest.fixture(scope="module")
def sec4():
    return WeightCalculus(Modulus.sec4(), 1.0, 1.0)


class TestTheta:
    def test_lipschitz_log(self, lip):
        assert lip.theta(math.e ** 2) == pytest.approx(2, rel=1e-12)

    def test_zero_at_left_end(self, lip, sec4):
        assert lip.theta(1.0) == 0.0
        assert sec4.theta(E1) == 0.0

    def test_domain_floor(self, lip, sec4):
        with pytest.raises(WeightDomainError):
            lip.theta(0.5)
        with pytest.raises(WeightDomainError):
            sec4.theta(2.0)

    def test_sec4_closed_form(self, sec4):
        for rho in (E1, 10.0, 1e3, 1e6, 1e100):
            assert sec4.theta(rho) == pytest.approx(closed_form_theta_sec4(rho), rel=1e-9, abs=1e-15)

    def test_theta_log_far_beyond_float(self):
        w = WeightCalculus(Modulus.loglip(), 1.0, 1.0)
        # r(v) = log(1 + e^v) ~ v, so theta(e^u) grows like log u
        assert w.theta_log(1e200) == pytest.approx(math.log(1e200) + 0.0, rel=1e-2)

    def test_inverse_examples(self, lip, sec4):
        assert lip.theta_inv(3.0) == pytest.approx(math.exp(3), rel=1e-10)
        assert lip.theta_inv(0.0) == 1.0
        assert sec4.theta_inv(0.0) == pytest.approx(E1, rel=1e-15)
        x = math.log(math.log(1 + math.log(1e6)))
        assert sec4.theta_inv(x) == pytest.approx(1e6, rel=1e-8)

    def test_inverse_overflow(self):
        w = WeightCalculus(Modulus.hoelder(0.5), 1.0, 1.0)
        # the Hoelder theta is bounded by 2, so 3 is out of range
        with pytest.raises(WeightOverflow):
            w.log_theta_inv(3.0)

    def test_negative_argument(self, lip):
        with pytest.raises(WeightDomainError):
            lip.theta_inv(-1.0)

    @pytest.mark.parametrize("m", BUILTIN_OSGOOD, ids=lambda m: m.name)
    @settings(max_examples=25, deadline=None)
    @given(x=st.floats(0.0, 5.0))
    def test_round_trip(self, m, x):
        w = WeightCalculus(m, 1.0, 1.0)
        u = w.log_theta_inv(x)
        assert abs(w.theta_log(u) - x) <= 1e-8 * (1 + x)

    def test_strictly_increasing(self, sec4):
        rho = np.geomspace(E1, 1e12, 40)
        th = [sec4.theta(r) for r in rho]
        assert np.all(np.diff(th) > 0)


class TestPsiPhi:
    def test_lipschitz_examples(self, lip):
        assert lip.psi(0.5) == pytest.approx(4, rel=1e-12)
        assert lip.phi(0.5) == pytest.approx(-1, rel=1e-10)
        assert lip.phi(0.25) == pytest.approx(-3, rel=1e-10)
        assert lip.phi_prime(0.5) == pytest.approx(4, rel=1e-12)

    def test_values_at_one(self, lip, sec4):
        assert lip.psi(1.0) == 1.0
        assert lip.phi(1.0) == 0.0
        assert sec4.psi(1.0) == pytest.approx(E1, rel=1e-10)
        w = WeightCalculus(Modulus.sec4(), 3.0, 0.5)
        assert w.phi_prime(1.0) == pytest.approx(0.5 * E1, rel=1e-10)

    def test_domain(self, lip):
        for y in (0.0, 1.5, -0.1):
            with pytest.raises(WeightDomainError):
                lip.psi(y)

    def test_sec4_closed_form(self, sec4):
        y = np.linspace(0.05, 1.0, 30)
        np.testing.assert_allclose(sec4.log_psi(y), closed_form_log_psi_sec4(1.0, 1.0, y), rtol=1e-9)
        assert sec4.psi(0.9) == pytest.approx(float(closed_form_psi_sec4(1, 1, 0.9)), rel=1e-5)

    def test_closed_form_examples(self):
        assert float(closed_form_psi_sec4(1, 1, 1.0)) == pytest.approx(E1, rel=1e-15)
        ref = math.exp(math.exp(math.e) - 1)
        assert float(closed_form_psi_sec4(1, 1, math.exp(-1))) == pytest.approx(ref, rel=1e-14)
        assert ref == pytest.approx(1.403e6, rel=1e-3)

    def test_closed_form_overflow_threshold(self):
        with pytest.raises(WeightOverflow) as info:
            closed_form_psi_sec4(1, 1, 0.1)
        y_min = info.value.threshold
        assert math.isfinite(float(closed_form_psi_sec4(1, 1, y_min * 1.001)))

    def test_phi_against_direct_quadrature(self):
        w = WeightCalculus(Modulus.loglip(), 1.5, 0.8)
        for y in (0.9, 0.5, 0.1, 0.01):
            ref, _ = integrate.quad(lambda s: float(w.psi(s)), y, 1, epsrel=1e-12, limit=200)
            assert w.phi(y) == pytest.approx(-0.8 * ref, rel=1e-8)

    def test_sec4_phi_against_closed_form_psi(self):
        ref, _ = integrate.quad(lambda s: float(closed_form_psi_sec4(1, 1, s)), 0.2, 1,
                                epsrel=1e-12, limit=200)
        assert WeightCalculus(Modulus.sec4(), 1.0, 1.0).phi(0.2) == pytest.approx(-ref, rel=1e-8)

    @pytest.mark.parametrize("m", BUILTIN_OSGOOD, ids=lambda m: m.name)
    def test_shape_invariants(self, m):
        w = WeightCalculus(m, 1.0, 1.0)
        # stay inside the range where psi is a finite double
        y_lo = max(0.02, 1.05 * w._y_of_log_value(700.0))
        y = np.linspace(y_lo, 1.0, 60)
        psi = w.psi(y)
        phi = w.phi(y)
        assert np.all(psi >= 1) and np.all(np.diff(psi) < 0)
        assert phi[-1] == 0 and np.all(phi <= 0) and np.all(np.diff(phi) > 0)
        # concave: slopes decrease
        assert np.all(np.diff(np.diff(phi) / np.diff(y)) < 0)
        ratio = w.q / w.phi_prime(y[:-1])
        assert np.all((ratio > 0) & (ratio < 1))

    def test_phi_prime_is_q_psi(self):
        w = WeightCalculus(Modulus.sec4(), 1.0, 0.7)
        y = np.linspace(0.1, 0.95, 9)
        np.testing.assert_allclose(w.phi_prime(y), 0.7 * w.psi(y), rtol=1e-15)
        assert np.all(w.phi_prime(y) >= 0.7 * E1)
        # finite differences of phi reproduce phi' where psi varies slowly enough
        y = y[y >= 0.2]
        d = 1e-5
        fd = (w.phi(y + d) - w.phi(y - d)) / (2 * d)
        np.testing.assert_allclose(fd, w.phi_prime(y), rtol=1e-6)

    def test_phi_increment_matches_difference(self):
        w = WeightCalculus(Modulus.lipschitz(), 2.0, 1.0)
        a, b = 0.3, 0.7
        ref = w.phi(b) - w.phi(a)
        assert math.exp(w.log_phi_increment(a, b)) == pytest.approx(ref, rel=1e-12)
        assert w.log_phi_increment(0.5, 0.5) == -math.inf


class TestPhiOde:
    def test_lipschitz(self, lip):
        assert lip.check_phi_ode(np.linspace(0.01, 0.99, 50)) <= 1e-4

    def test_sec4_representable_part(self):
        w = WeightCalculus(Modulus.sec4(), 2.0, 1.0)
        # log psi = e^{y^-2} - 1 leaves double range below y ~ 0.0381
        assert w.check_phi_ode(np.linspace(0.04, 0.99, 50)) <= 1e-3
        with pytest.raises(WeightOverflow):
            w.check_phi_ode(np.linspace(0.01, 0.99, 50))

    def test_single_point(self, lip):
        one = lip.check_phi_ode([0.3])
        assert one == lip.check_phi_ode(np.array([0.3]))
        assert one <= 1e-4

    @pytest.mark.parametrize("m", BUILTIN_OSGOOD, ids=lambda m: m.name)
    def test_all_builtins(self, m):
        w = WeightCalculus(m, 1.0, 1.0)
        assert w.check_phi_ode(np.linspace(0.01, 0.99, 50)) <= 1e-3

    def test_direct_form_on_lipschitz(self, lip):
        y = np.linspace(0.1, 0.9, 9)
        np.testing.assert_allclose(y * lip.phi_second_fd(y), lip.phi_ode_rhs(y), rtol=1e-6)


class TestSecondInequality:
    # -(1/2) y phi'' > (lam q / 2) phi'  reduces to  w(s)/s > 1 at s = 1/psi(y)
    @pytest.mark.parametrize("m", [Modulus.sec4(), Modulus.logloglip()], ids=lambda m: m.name)
    def test_holds(self, m):
        w = WeightCalculus(m, 2.5, 1.0)
        y_lo = max(0.2, 1.05 * w._y_of_log_value(600.0))
        y = np.linspace(y_lo, 0.99, 40)
        lhs = -0.5 * y * w.phi_second_fd(y)
        rhs = 0.5 * w.p * w.phi_prime(y)
        assert np.all(lhs > rhs)

    def test_loglip_fails_near_one(self):
        # log(1 + e^u) < 1 for small u = log psi: the inequality needs w(s) > s
        w = WeightCalculus(Modulus.loglip(), 2.5, 1.0)
        y = np.array([0.99])
        assert -0.5 * y * w.phi_second_fd(y) < 0.5 * w.p * w.phi_prime(y)


class TestH:
    def test_example(self, lip):
        assert lip.h_weight(1.0, 0.5) == pytest.approx(4 * math.e ** 4, rel=1e-12)

    def test_limits(self, lip):
        assert lip.h_weight(1.0, 1 - 1e-6) == pytest.approx(lip.q, rel=1e-3)
        vals = [float(lip.log_h(1.0, 10.0 ** -k)) for k in range(1, 6)]
        assert vals[1] > math.log(1e6) and np.all(np.diff(vals) > 0)
        with pytest.raises(WeightOverflow):
            lip.h_weight(1.0, 1e-2)

    def test_decreasing_and_above_q(self, lip):
        z = np.linspace(0.05, 0.99, 50)
        h = lip.h_weight(0.3, z)
        assert np.all(np.diff(h) < 0) and np.all(h > lip.q)

    def test_inverse_examples(self, lip):
        assert lip.h_inv(1.0, 4 * math.e ** 4) == pytest.approx(0.5, abs=1e-6)
        assert lip.h_inv(1.0, float(lip.h_weight(1.0, 0.9))) == pytest.approx(0.9, abs=1e-9)
        assert lip.h_inv(1.0, 1.0001) > 0.99

    def test_inverse_domain(self, lip):
        with pytest.raises(WeightDomainError):
            lip.h_inv(1.0, 1.0)
        with pytest.raises(WeightDomainError):
            lip.h_inv(1.0, log_y=-1.0)

    def test_inverse_in_log_form(self, lip):
        z = lip.h_inv(0.5, log_y=5000.0)
        assert float(lip.log_h(0.5, z)) == pytest.approx(5000.0, rel=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(z=st.floats(0.05, 0.99), tau=st.floats(0.05, 2.0))
    def test_round_trip(self, lip, z, tau):
        log_y = float(lip.log_h(tau, z))
        back = float(lip.log_h(tau, lip.h_inv(tau, log_y=log_y)))
        assert abs(back - log_y) <= 1e-6 * max(1.0, abs(log_y))
        assert lip.h_inv(tau, log_y=log_y) == pytest.approx(z, rel=1e-6)


class TestLambda:
    def test_examples(self, lip):
        assert lip.Lambda(1.0) == 0.0
        assert lip.Lambda(2.0) == pytest.approx(-2, rel=1e-10)
        assert lip.Lambda_inv(-2.0) == pytest.approx(2, rel=1e-10)
        assert lip.Lambda_inv(0.0) == 1.0

    def test_domain(self, lip):
        with pytest.raises(WeightDomainError):
            lip.Lambda(0.5)
        with pytest.raises(WeightDomainError):
            lip.Lambda_inv(1.0)

    def test_decreasing(self, sec4):
        y = np.linspace(1.0, 6.0, 30)
        assert np.all(np.diff(sec4.Lambda(y)) < 0)
        # beyond the double range of Lambda its modulus keeps growing
        big = np.linspace(6.0, 40.0, 30)
        assert np.all(np.diff(sec4.log_abs_Lambda(big)) > 0)

    @settings(max_examples=30, deadline=None)
    @given(x=st.floats(-1e4, -1e-3))
    def test_round_trip(self, lip, x):
        assert abs(float(lip.Lambda(lip.Lambda_inv(x))) - x) <= 1e-6 * (1 + abs(x))


class TestAppendixRatio:
    def test_lipschitz_limit(self):
        # ratio = zeta^2 / (zeta (zeta - 1)) -> 1 = lam - 1/q for lam = 2, q = 1
        w = WeightCalculus(Modulus.lipschitz(), 2.0, 1.0)
        r = w.appendix_ratio(np.array([10.0, 1e3, 1e6]))
        np.testing.assert_allclose(r, [10 / 9, 1e3 / 999, 1e6 / (1e6 - 1)], rtol=1e-8)

    def test_sec4_increasing(self):
        w = WeightCalculus(Modulus.sec4(), 0.15, 1.0)
        lr = w.log_appendix_ratio(10.0 ** np.arange(1, 7))
        assert np.all(np.diff(lr) > 0)

    def test_sec4_brute_force(self):
        # psi(1/z) / (z q int_{1/z}^1 psi), quadrature of the closed form in t = log(1/y)
        w = WeightCalculus(Modulus.sec4(), 0.15, 1.0)
        z = 1e3
        lpz = float(closed_form_log_psi_sec4(0.15, 1.0, 1 / z))
        f = lambda t: math.exp(float(closed_form_log_psi_sec4(0.15, 1.0, math.exp(-t))) - lpz - t)
        val, _ = integrate.quad(f, 0.0, math.log(z), epsrel=1e-12, limit=500)
        ref = -math.log(z * val)
        assert float(w.log_appendix_ratio(z)) == pytest.approx(ref, rel=1e-8)

    def test_precondition(self):
        w = WeightCalculus(Modulus.sec4(), 0.15, 1.0)
        with pytest.raises(WeightDomainError):
            w.log_appendix_ratio(1.5)


def test_custom_modulus_must_pass_axioms():
    with pytest.raises(WeightDomainError):
        WeightCalculus(Modulus.custom(lambda s: s * s), 1.0, 1.0)
    w = WeightCalculus(Modulus.custom(lambda s: s), 2.0, 1.0)
    assert w.psi(0.5) == pytest.approx(4, rel=1e-10)


def test_parameters_positive():
    with pytest.raises(WeightDomainError):
        WeightCalculus(Modulus.lipschitz(), 0.0, 1.0)
