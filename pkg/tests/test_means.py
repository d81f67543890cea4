import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from blochlab import DomainError, Gauge, NumericWarning
from blochlab.lacunary import GapSeries, build_extremal
from blochlab.means import (Holomorphic, RadialGrid, bloch_norm_estimate, circle_max,
                            hardy_bloch_norm_estimate, integral_mean, starting_angles)

identity = Holomorphic(lambda z: z, lambda z: np.ones_like(z), nonnegative=True, label="z")
one = Holomorphic(lambda z: np.ones_like(z), lambda z: np.zeros_like(z), label="1")


def constant(c):
    return Holomorphic(lambda z: c * np.ones_like(z), lambda z: np.zeros_like(z), label=str(c))


class TestGrid:
    def test_radii_dyadic(self):
        assert np.allclose(RadialGrid(0, 3).radii, [0, 0.5, 0.75, 0.875], rtol=0, atol=0)

    def test_subdivisions(self):
        radii = RadialGrid(0, 2, subdivisions=2).radii
        assert len(radii) == 5
        assert radii[1] == pytest.approx(1 - 2 ** -0.5)

    @pytest.mark.parametrize("kw", [dict(m_min=3, m_max=2), dict(angles=12), dict(angles=8),
                                    dict(subdivisions=0)])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            RadialGrid(**kw)

    def test_starting_angles(self):
        assert starting_angles(0.0) == 16
        assert starting_angles(1 - 2 ** -20) == 2 ** 22


class TestIntegralMean:
    def test_identity(self):
        assert integral_mean(identity, 2, 0.5) == pytest.approx(0.5, rel=1e-14)

    @pytest.mark.parametrize("p", [0.5, 1, 2, 7])
    def test_constant_one(self, p):
        assert integral_mean(one, p, 0.9) == pytest.approx(1.0, rel=1e-14)

    def test_const_series_orthogonality(self):
        s = build_extremal(Gauge.const(), 30)
        ref = math.fsum(0.5 ** (2 * 2 ** k) for k in range(40))
        assert ref == pytest.approx(0.31642151, abs=5e-9)
        assert integral_mean(s, 2, 0.5) ** 2 == pytest.approx(ref, rel=1e-12)
        assert integral_mean(s, 2, 0.5) == pytest.approx(0.5625135634114907, rel=1e-12)

    @given(st.floats(0.0, 0.999), st.integers(0, 15), st.sampled_from(["2^k", "2^k-1"]))
    def test_m2_matches_orthogonality(self, r, K, rule):
        s = build_extremal(Gauge.log(-0.5), K, rule)
        closed = math.fsum(a * a * r ** (2 * n) for a, n in zip(s.coeffs, s.exponents))
        assert integral_mean(s, 2, r) ** 2 == pytest.approx(closed, rel=1e-8, abs=1e-300)

    def test_m1_matches_brute_force_generic_path(self):
        s = build_extremal(Gauge.power(0.5), 8)
        generic = Holomorphic(s, label="generic")
        for r in (0.3, 0.9, 0.99):
            assert integral_mean(generic, 1, r) == pytest.approx(integral_mean(s, 1, r), rel=1e-8)

    @given(st.lists(st.floats(0.0, 0.99), min_size=2, max_size=5), st.sampled_from([1, 2, 3]))
    def test_nondecreasing_in_r(self, radii, p):
        s = GapSeries((1.0, -0.7, 0.4, 0.9, -0.2), "2^k-1")
        means = [integral_mean(s, p, r) for r in sorted(radii)]
        assert all(b >= a * (1 - 1e-8) for a, b in zip(means, means[1:]))

    def test_warns_when_not_converged(self):
        s = build_extremal(Gauge.const(), 20)
        with pytest.warns(NumericWarning):
            integral_mean(s, 1, 1 - 2 ** -18, max_angles=2 ** 12)

    def test_full_output(self):
        v, info = integral_mean(identity, 2, 0.5, full_output=True)
        assert info["converged"] and info["n_angles"] >= 16

    @pytest.mark.parametrize("r, p, n", [(1.0, 2, None), (0.5, 0, None), (0.5, 2, 24)])
    def test_invalid(self, r, p, n):
        with pytest.raises(DomainError):
            integral_mean(identity, p, r, n_angles=n)

    def test_deep_radius_converges(self):
        s = build_extremal(Gauge.const(), 30)
        with warnings.catch_warnings():
            warnings.simplefilter("error", NumericWarning)
            v = integral_mean(s, 2, 1 - 2 ** -16)
        closed = math.fsum(math.exp(2 * 2 ** k * math.log1p(-2 ** -16)) for k in range(31))
        assert v ** 2 == pytest.approx(closed, rel=1e-8)


class TestNorms:
    def test_identity(self):
        grid = RadialGrid(0, 20)
        assert bloch_norm_estimate(identity, Gauge.const(), grid).value == pytest.approx(0.25)
        assert hardy_bloch_norm_estimate(identity, Gauge.const(), 2, grid).value == pytest.approx(0.25)

    @pytest.mark.parametrize("c", [0.0, 2.5, -1.0, 3j])
    def test_constants(self, c):
        grid = RadialGrid(0, 8)
        f = constant(c)
        assert bloch_norm_estimate(f, Gauge.power(0.5), grid).value == pytest.approx(abs(c))
        assert hardy_bloch_norm_estimate(f, Gauge.power(0.5), 2, grid).value == pytest.approx(abs(c))

    def test_labelled_grid_sup(self):
        est = bloch_norm_estimate(identity, Gauge.const(), RadialGrid(0, 4))
        assert est.kind == "grid sup"
        assert est.argmax == (0.5, 0.0)

    def test_const_series_stable(self):
        g = Gauge.const()
        s = build_extremal(g, 40)
        coarse = bloch_norm_estimate(s, g, RadialGrid(0, 20)).value
        fine = bloch_norm_estimate(s, g, RadialGrid(0, 20, subdivisions=8)).value
        assert math.isfinite(coarse)
        assert fine >= coarse
        assert fine <= 1.1 * coarse

    def test_nonnegative_shortcut_agrees_with_sweep(self):
        g = Gauge.log(-0.5)
        s = build_extremal(g, 30)

        class Swept:
            nonnegative = False
            __call__ = staticmethod(s)
            radial_derivative = staticmethod(s.radial_derivative)

        swept = Swept()
        grid = RadialGrid(0, 12, angles=64)
        assert bloch_norm_estimate(s, g, grid).value == pytest.approx(
            bloch_norm_estimate(swept, g, grid).value, rel=1e-12)

    @given(st.lists(st.floats(-1, 1), min_size=1, max_size=8), st.sampled_from([1, 2, 4]))
    def test_hardy_bloch_below_bloch(self, coeffs, p):
        s = GapSeries(tuple(coeffs), "2^k-1")
        g = Gauge.power(0.5)
        grid = RadialGrid(0, 8, angles=64)
        hb = hardy_bloch_norm_estimate(s, g, p, grid).value
        b = bloch_norm_estimate(s, g, grid).value
        assert hb <= b * (1 + 1e-8) + 1e-12

    @given(st.lists(st.floats(-1, 1), min_size=2, max_size=9), st.floats(0.3, 0.99))
    def test_circle_max_matches_dense_sampling(self, coeffs, r):
        s = GapSeries(tuple(coeffs), "2^k")
        n = 64 * s.exponents[-1]
        dense = np.max(np.abs(s.radial_derivative(r * np.exp(2j * np.pi * np.arange(n) / n))))
        found, theta = circle_max(s.derivative_view(), r, RadialGrid())
        assert found >= dense * (1 - 1e-6)
        assert abs(s.radial_derivative(r * np.exp(1j * theta))) == pytest.approx(found, rel=1e-12)

    def test_extremal_hardy_bloch_below_bloch(self):
        g = Gauge.const()
        s = build_extremal(g, 30)
        grid = RadialGrid(0, 12)
        assert (hardy_bloch_norm_estimate(s, g, 2, grid).value
                <= bloch_norm_estimate(s, g, grid).value)
