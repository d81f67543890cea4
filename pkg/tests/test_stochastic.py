import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from blochlab import DomainError, Gauge, GapSeries, ResourceError
from blochlab.lacunary import build_extremal
from blochlab.stochastic import (RademacherFamily, closed_form_moment, enumerate_moment,
                                 family_eval, moment_integral, montecarlo_moment, rademacher)

weights = st.lists(st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False),
                   min_size=1, max_size=10)
real_weights = st.lists(st.floats(-2.0, 2.0), min_size=1, max_size=12)


def brute_moment(w, p):
    """Average over all sign patterns with itertools, straight from the definition."""
    vals = [abs(sum(e * x for e, x in zip(eps, w))) ** (2 * p)
            for eps in itertools.product((1, -1), repeat=len(w))]
    return math.fsum(vals) / len(vals)


def family(g=Gauge.const(), K=2):
    return RademacherFamily(build_extremal(g, K, "2^k-1"))


class TestRademacher:
    @pytest.mark.parametrize("k, y, sign", [(0, 0.25, 1), (0, 0.75, -1), (1, 0.3, -1),
                                            (0, 0.0, 1), (0, 0.5, 1), (2, 0.125, 1)])
    def test_values(self, k, y, sign):
        assert rademacher(k, y) == sign

    @given(st.integers(0, 20), st.floats(0.0, 1.0))
    def test_matches_sine_off_zeros(self, k, y):
        s = math.sin(2 ** (k + 1) * math.pi * y)
        if abs(s) > 1e-6:
            assert rademacher(k, y) == (1 if s > 0 else -1)

    def test_domain(self):
        with pytest.raises(DomainError):
            rademacher(0, 1.5)

    def test_patterns_are_complete(self):
        # midpoints of dyadic cells of length 2^-K see every sign pattern once
        K = 6
        y = (np.arange(2 ** K) + 0.5) / 2 ** K
        fam = family(K=K - 1)
        pats = {tuple(row) for row in fam.signs(y)}
        assert len(pats) == 2 ** K


class TestFamily:
    def test_requires_shifted_rule(self):
        with pytest.raises(DomainError):
            RademacherFamily(build_extremal(Gauge.const(), 2))

    def test_size(self):
        assert family(K=7).size == 8

    def test_origin(self):
        fam = family(Gauge.power(0.5), 5)
        assert family_eval(fam, 0.25, 0) == 1.0
        assert family_eval(fam, 0.75, 0) == -1.0

    def test_const_three_terms(self):
        fam = family(K=2)
        signs = [rademacher(k, 0.25) for k in range(3)]
        ref = signs[0] * 1 + signs[1] * 0.5 + signs[2] * 0.125
        assert family_eval(fam, 0.25, 0.5) == pytest.approx(ref)
        assert ref == 1.625

    def test_domain(self):
        with pytest.raises(DomainError):
            family_eval(family(), 0.3, 1.0)


class TestMoments:
    @given(weights, st.sampled_from([0.5, 1, 1.5, 2, 3]))
    def test_enumeration_matches_itertools(self, w, p):
        assert enumerate_moment(w, p) == pytest.approx(brute_moment(w, p), rel=1e-12, abs=1e-300)

    @given(weights)
    def test_closed_forms(self, w):
        assert closed_form_moment(w, 1) == pytest.approx(brute_moment(w, 1), rel=1e-12, abs=1e-300)
        assert closed_form_moment(w, 2) == pytest.approx(brute_moment(w, 2), rel=1e-12, abs=1e-300)

    @given(real_weights)
    def test_real_p2_formula(self, w):
        a = math.fsum(x * x for x in w)
        ref = 3 * a * a - 2 * math.fsum(x ** 4 for x in w)
        assert enumerate_moment(w, 2) == pytest.approx(ref, rel=1e-12, abs=1e-300)

    @given(weights, st.sampled_from([1, 1.5, 2, 3]))
    def test_power_mean_lower_bound(self, w, p):
        a = math.fsum(abs(x) ** 2 for x in w)
        assert enumerate_moment(w, p) >= a ** p * (1 - 1e-12)

    @given(weights, st.integers(0, 9), st.sampled_from([0.5, 1, 2]))
    def test_sign_flip_invariance(self, w, k, p):
        k %= len(w)
        flipped = list(w)
        flipped[k] = -flipped[k]
        assert enumerate_moment(flipped, p) == pytest.approx(enumerate_moment(w, p), rel=1e-12, abs=1e-300)

    @given(st.floats(-3, 3), st.complex_numbers(max_magnitude=0.99), st.sampled_from([0.5, 1, 2.5]))
    def test_single_term(self, a, z, p):
        fam = RademacherFamily(GapSeries((a,), "2^k-1"))
        assert moment_integral(fam, z, p) == pytest.approx(abs(a) ** (2 * p), rel=1e-13, abs=1e-300)

    def test_gray_code_blocks(self, monkeypatch):
        # force several high bits through the Gray-code walk
        from blochlab import stochastic
        monkeypatch.setattr(stochastic, "_BLOCK_BITS", 3)
        w = [0.9, -0.3 + 0.2j, 0.5, 0.1j, 0.7, -0.05, 0.33]
        assert enumerate_moment(w, 1.5) == pytest.approx(brute_moment(w, 1.5), rel=1e-13)

    def test_resource_limit(self):
        with pytest.raises(ResourceError):
            enumerate_moment(np.ones(25), 1)

    def test_closed_form_rejects_other_p(self):
        with pytest.raises(DomainError):
            closed_form_moment([1.0], 3)

    @pytest.mark.parametrize("p", [0.5, 1, 2])
    @pytest.mark.parametrize("K", [3, 13])
    def test_montecarlo_within_three_stderr(self, p, K):
        fam = family(Gauge.log(-0.5), K)
        z = 0.8 * np.exp(0.3j)
        exact = moment_integral(fam, z, p, "exact")
        mc, info = moment_integral(fam, z, p, "montecarlo", seed=11, samples=40_000, full_output=True)
        assert abs(mc - exact) <= 3 * info["stderr"]

    def test_montecarlo_deterministic(self):
        w = np.array([1.0, 0.5, 0.25, 0.1])
        assert montecarlo_moment(w, 2, 5, 10_000) == montecarlo_moment(w, 2, 5, 10_000)
        assert montecarlo_moment(w, 2, 5, 10_000) != montecarlo_moment(w, 2, 6, 10_000)

    def test_modes_agree_p1(self):
        fam = family(Gauge.power(0.5), 15)
        z = 0.95j
        assert moment_integral(fam, z, 1, "exact") == pytest.approx(
            moment_integral(fam, z, 1, "closed"), rel=1e-14)

    @pytest.mark.parametrize("kw", [dict(z=1.0, p=1), dict(z=0.5, p=0), dict(z=0.5, p=1, mode="x")])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            moment_integral(family(), **kw)
