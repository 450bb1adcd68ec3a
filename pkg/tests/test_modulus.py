import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from osgoodlab.modulus import (INCONCLUSIVE, NON_OSGOOD, OSGOOD, Modulus, ModulusDomainError,
                               check_modulus_axioms, classify_osgood, eval_modulus,
                               osgood_integral, parse_modulus, seminorm)

from conftest import BUILTIN_OSGOOD

ALL = BUILTIN_OSGOOD + [Modulus.hoelder(0.5), Modulus.hoelder(0.25)]


class TestEval:
    def test_lipschitz_identity(self):
        assert eval_modulus(Modulus.lipschitz(), 0.5) == 0.5

    def test_loglip_at_one(self):
        assert eval_modulus(Modulus.loglip(), 1.0) == pytest.approx(math.log(2), rel=1e-15)

    def test_sec4_at_smax(self):
        s = math.exp(1 - math.e)
        # (1 - log s) = e and log e = 1, so the value is s * e
        assert eval_modulus(Modulus.sec4(), s) == pytest.approx(math.exp(2 - math.e), rel=1e-14)

    def test_constant_extension_beyond_smax(self):
        m = Modulus.sec4()
        assert m(0.9) == m(m.s_max)

    def test_nonpositive_argument_rejected(self):
        with pytest.raises(ModulusDomainError):
            Modulus.lipschitz()(0.0)
        with pytest.raises(ModulusDomainError):
            Modulus.loglip()(np.array([0.1, -1.0]))

    @pytest.mark.parametrize("m", ALL, ids=lambda m: m.name)
    def test_log_ratio_matches_direct_ratio(self, m):
        v = np.linspace(m.v_min, 30, 50)
        s = np.exp(-v)
        np.testing.assert_allclose(m.log_ratio(v), m(s) / s, rtol=1e-12)

    def test_log_ratio_finite_far_below_float_floor(self):
        v = np.array([1e3, 1e10, 1e100])
        for m in BUILTIN_OSGOOD:
            assert np.all(np.isfinite(m.log_ratio(v)))


class TestParse:
    @pytest.mark.parametrize("name,kind", [("lipschitz", "lipschitz"), ("LogLip", "loglip"),
                                           ("logloglip", "logloglip"), ("sec4", "sec4")])
    def test_names(self, name, kind):
        assert parse_modulus(name).kind == kind

    def test_hoelder_exponent(self):
        assert parse_modulus("hoelder:0.5").tau == 0.5

    @pytest.mark.parametrize("bad", ["hoelder:x", "hoelder:1.5", "cubic", ""])
    def test_malformed(self, bad):
        with pytest.raises(ValueError):
            parse_modulus(bad)


class TestOsgoodIntegral:
    def test_lipschitz(self):
        assert osgood_integral(Modulus.lipschitz(), math.exp(-3)) == pytest.approx(3, rel=1e-9)

    def test_hoelder_half(self):
        # 2 (1 - sqrt(eps)) at eps = 1/4
        assert osgood_integral(Modulus.hoelder(0.5), 0.25) == pytest.approx(1, rel=1e-9)

    @pytest.mark.parametrize("m", ALL, ids=lambda m: m.name)
    def test_empty_interval(self, m):
        assert osgood_integral(m, m.s_max) == 0.0

    def test_loglip_antiderivative(self):
        # int ds / (s log(1+1/s)) has no elementary form; compare with scipy in s
        from scipy import integrate
        m = Modulus.loglip()
        ref, _ = integrate.quad(lambda s: 1 / m(s), 1e-4, 1, epsrel=1e-12, limit=200)
        assert osgood_integral(m, 1e-4) == pytest.approx(ref, rel=1e-9)

    def test_out_of_range(self):
        with pytest.raises(ModulusDomainError):
            osgood_integral(Modulus.lipschitz(), 0.0)
        with pytest.raises(ModulusDomainError):
            osgood_integral(Modulus.sec4(), 0.5)


class TestClassify:
    @pytest.mark.parametrize("m", BUILTIN_OSGOOD, ids=lambda m: m.name)
    def test_osgood_builtins(self, m):
        assert classify_osgood(m) == OSGOOD

    @pytest.mark.parametrize("tau", [0.25, 0.5, 0.9])
    def test_hoelder_non_osgood(self, tau):
        assert classify_osgood(Modulus.hoelder(tau)) == NON_OSGOOD

    def test_returns_known_label(self):
        m = Modulus.custom(lambda s: np.sqrt(s) * np.log1p(1 / s) / math.log(2))
        assert classify_osgood(m) in (OSGOOD, NON_OSGOOD, INCONCLUSIVE)


class TestSeminorm:
    def test_identity_lipschitz(self):
        t = np.linspace(0, 0.99, 200)
        assert seminorm(t, t, Modulus.lipschitz()).seminorm == pytest.approx(1, rel=1e-12)

    def test_constant(self):
        t = np.linspace(0, 0.9, 50)
        rep = seminorm(t, np.full_like(t, 3.0), Modulus.loglip())
        assert rep.seminorm == 0.0

    def test_sqrt_hoelder(self):
        t = np.linspace(0, 0.999, 400)
        rep = seminorm(t, np.sqrt(t), Modulus.hoelder(0.5))
        assert rep.seminorm == pytest.approx(1, rel=1e-12)
        a, b = rep.witness_pair
        assert min(a, b) == 0.0

    def test_matches_brute_force(self, rng):
        t = np.sort(rng.uniform(0, 0.95, 40))
        f = rng.standard_normal(40)
        m = Modulus.loglip()
        d = np.abs(t[:, None] - t[None, :])
        off = d > 0
        ref = np.max(np.abs(f[:, None] - f[None, :])[off] / m(d[off]))
        assert seminorm(t, f, m).seminorm == pytest.approx(ref, rel=1e-14)

    def test_requires_two_samples(self):
        with pytest.raises(ValueError):
            seminorm([0.1], [1.0], Modulus.lipschitz())

    @settings(max_examples=30, deadline=None)
    @given(c=st.floats(-1e3, 1e3, allow_nan=False), seed=st.integers(0, 2 ** 32 - 1))
    def test_homogeneous(self, c, seed):
        r = np.random.default_rng(seed)
        t = np.sort(r.uniform(0, 0.9, 25))
        f = r.standard_normal(25)
        m = Modulus.sec4()
        a = seminorm(t, c * f, m).seminorm
        b = abs(c) * seminorm(t, f, m).seminorm
        assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


class TestAxioms:
    @pytest.mark.parametrize("m", ALL, ids=lambda m: m.name)
    def test_builtins_pass(self, m):
        rep = check_modulus_axioms(m, 100)
        assert rep.monotone and rep.concave and rep.vanishes

    def test_square_not_concave(self):
        rep = check_modulus_axioms(Modulus.custom(lambda s: s * s), 100)
        assert not rep.concave

    def test_grid_size_guard(self):
        with pytest.raises(ValueError):
            check_modulus_axioms(Modulus.lipschitz(), 2)


@pytest.mark.parametrize("m", ALL, ids=lambda m: m.name)
@settings(max_examples=40, deadline=None)
@given(a=st.floats(1e-12, 1.0), b=st.floats(1e-12, 1.0))
def test_property_axioms_on_random_pairs(m, a, b):
    s1, s2 = sorted((a * m.s_max, b * m.s_max))
    u1, u2 = m(s1), m(s2)
    assert 0 < u1 <= 1 and 0 < u2 <= 1
    if s1 < s2:
        assert u1 < u2
    assert m(0.5 * (s1 + s2)) >= 0.5 * (u1 + u2) * (1 - 1e-12)
    # w(s)/s does not increase
    assert u2 / s2 <= u1 / s1 * (1 + 1e-12)


@pytest.mark.parametrize("m", ALL, ids=lambda m: m.name)
def test_vanishes_at_zero(m):
    vals = [m(10.0 ** -k) for k in range(2, 300, 8)]
    assert all(x > y for x, y in zip(vals, vals[1:]))
    assert vals[-1] < 1e-60
