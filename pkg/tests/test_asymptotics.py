import math

import numpy as np
import pytest

from symkl import (
    CountTable,
    DegenerateSampleError,
    EstimateResult,
    PopulationModel,
    confidence_interval,
    exact_sigma2,
    influence_coefficients,
    influence_value,
    normal_cdf,
    normal_quantile,
    plug_in_estimate,
    plugin_sigma2,
)
from symkl.streams import TAG_SCRATCH, auxiliary_stream

from conftest import random_model

# Frozen from direct enumeration of the worked 2-symbol example
# (label_prob 0.5, conditionals (1/2, 1/2) and (1/4, 3/4)).
GOLDEN_SIGMA2 = 4.420014023426001
GOLDEN_W = {
    (0, 1): 2.1051267888104865,
    (1, 1): -2.092097788525733,
    (0, 0): -3.654432933144542,
    (1, 0): 1.2094583108583448,
}


def brute_force_variance(model: PopulationModel) -> tuple[float, float]:
    """Independent route: enumerate the 2r outcomes through influence_value."""
    p = model.label_prob
    q = 1.0 - p
    outcomes = []
    for j in range(model.r):
        outcomes.append((p * model.cond_p[j], influence_value(model, j, 1)))
        outcomes.append((q * model.cond_q[j], influence_value(model, j, 0)))
    mean = math.fsum(prob * w for prob, w in outcomes)
    second = math.fsum(prob * w * w for prob, w in outcomes)
    return second - mean * mean, mean


class TestNormalHelpers:
    def test_cdf_midpoint(self):
        assert normal_cdf(0.0) == pytest.approx(0.5, abs=1e-15)

    def test_cdf_symmetry(self):
        for x in (0.3, 1.0, 2.5, 4.0):
            assert normal_cdf(-x) == pytest.approx(1.0 - normal_cdf(x), abs=1e-15)

    def test_cdf_vectorized(self):
        values = normal_cdf(np.array([-1.0, 0.0, 1.0]))
        assert values.shape == (3,)
        assert values[0] == pytest.approx(1.0 - values[2], abs=1e-15)

    def test_quantile_inverts_cdf(self):
        for prob in (0.01, 0.25, 0.5, 0.9, 0.999):
            assert normal_cdf(normal_quantile(prob)) == pytest.approx(prob, abs=1e-12)

    def test_reference_points(self):
        assert abs(normal_cdf(1.959964) - 0.975) <= 1e-7
        assert abs(normal_quantile(0.975) - 1.959964) <= 1e-6

    def test_quantile_domain(self):
        for bad in (0.0, 1.0, -0.5, 1.5):
            with pytest.raises(ValueError, match="quantile"):
                normal_quantile(bad)


class TestInfluenceCoefficients:
    def test_golden_values(self, test_model):
        coeffs = influence_coefficients(test_model.cond_p, test_model.cond_q)
        np.testing.assert_allclose(
            coeffs.b, [1.0 + math.log(2.0) - 0.5, 1.0 + math.log(2.0 / 3.0) - 1.5],
            rtol=0, atol=1e-15,
        )
        np.testing.assert_allclose(
            coeffs.c, [1.0 - math.log(2.0) - 2.0, 1.0 + math.log(1.5) - 2.0 / 3.0],
            rtol=0, atol=1e-15,
        )

    def test_vanish_at_equal_laws(self):
        coeffs = influence_coefficients((0.3, 0.7), (0.3, 0.7))
        np.testing.assert_array_equal(coeffs.b, [0.0, 0.0])
        np.testing.assert_array_equal(coeffs.c, [0.0, 0.0])

    def test_rejects_zero_entries(self):
        with pytest.raises(ValueError, match="strictly positive"):
            influence_coefficients((0.0, 1.0), (0.5, 0.5))

    def test_read_only(self, test_model):
        coeffs = influence_coefficients(test_model.cond_p, test_model.cond_q)
        with pytest.raises(ValueError):
            coeffs.b[0] = 0.0


class TestInfluenceValue:
    def test_golden_values(self, test_model):
        for (x, y), expected in GOLDEN_W.items():
            assert influence_value(test_model, x, y) == pytest.approx(
                expected, abs=1e-12
            )

    def test_mean_zero_over_outcomes(self, test_model):
        _, mean = brute_force_variance(test_model)
        assert abs(mean) <= 1e-12

    def test_domain_validation(self, test_model):
        with pytest.raises(ValueError, match="symbol index"):
            influence_value(test_model, 2, 1)
        with pytest.raises(ValueError, match="label"):
            influence_value(test_model, 0, 2)


class TestExactSigma2:
    def test_golden(self, test_model):
        result = exact_sigma2(test_model)
        assert result.sigma2 == pytest.approx(GOLDEN_SIGMA2, rel=1e-12)
        assert abs(result.mean_check) <= 1e-12

    def test_agrees_with_brute_force_enumeration(self):
        rng = np.random.default_rng(41)
        for _ in range(30):
            model = random_model(rng, int(rng.integers(2, 8)))
            direct = exact_sigma2(model)
            expected_sigma2, expected_mean = brute_force_variance(model)
            assert direct.sigma2 == pytest.approx(expected_sigma2, rel=1e-10, abs=1e-12)
            assert abs(direct.mean_check - expected_mean) <= 1e-12

    def test_zero_at_null(self):
        model = PopulationModel(label_prob=0.4, cond_p=(0.3, 0.7), cond_q=(0.3, 0.7))
        result = exact_sigma2(model)
        assert result.sigma2 == 0.0

    def test_single_draw_moments_match(self, test_model):
        # one million single draws, summarized through their outcome counts
        probs = np.concatenate(
            [
                test_model.label_prob * test_model.cond_p,
                (1.0 - test_model.label_prob) * test_model.cond_q,
            ]
        )
        w = np.array(
            [influence_value(test_model, j, 1) for j in range(test_model.r)]
            + [influence_value(test_model, j, 0) for j in range(test_model.r)]
        )
        m = 1_000_000
        counts = auxiliary_stream(97, TAG_SCRATCH).multinomial(m, probs)
        mean = float(counts @ w) / m
        var = float(counts @ ((w - mean) ** 2)) / (m - 1)
        sigma2 = exact_sigma2(test_model).sigma2
        assert abs(mean) <= 4.0 * math.sqrt(sigma2 / m)
        assert var == pytest.approx(sigma2, rel=0.05)


class TestPluginSigma2:
    def test_equals_exact_at_empirical_model(self):
        counts = CountTable(n1=np.array([30, 10]), n0=np.array([10, 30]))
        plugin = plugin_sigma2(counts)
        empirical = PopulationModel(
            label_prob=0.5, cond_p=(0.75, 0.25), cond_q=(0.25, 0.75)
        )
        assert plugin.sigma2 == exact_sigma2(empirical).sigma2

    def test_degenerate_counts_raise(self):
        with pytest.raises(DegenerateSampleError, match="zero empirical cell"):
            plugin_sigma2(CountTable(n1=np.array([5, 0]), n0=np.array([2, 3])))
        with pytest.raises(DegenerateSampleError, match="empty label class"):
            plugin_sigma2(CountTable(n1=np.array([0, 0]), n0=np.array([2, 3])))

    def test_zero_when_empirical_laws_match(self):
        counts = CountTable(n1=np.array([2, 2]), n0=np.array([2, 2]))
        assert plugin_sigma2(counts).sigma2 == 0.0


class TestConfidenceInterval:
    def estimate(self, value=0.2747, n=10_000):
        return EstimateResult(value=value, degenerate=False, reason=None, n=n)

    def test_half_width_golden(self, test_model):
        est = self.estimate()
        variance = exact_sigma2(test_model)
        ci = confidence_interval(est, variance, 0.95)
        expected_half = normal_quantile(0.975) * math.sqrt(variance.sigma2 / 10_000)
        assert ci.half_width == pytest.approx(expected_half, rel=1e-12)
        assert expected_half == pytest.approx(0.0412059, abs=5e-7)
        assert ci.lower == pytest.approx(est.value - expected_half, rel=1e-12)
        assert ci.level == 0.95
        assert not ci.degenerate_variance

    def test_higher_level_strictly_contains(self, test_model):
        est = self.estimate()
        variance = exact_sigma2(test_model)
        narrow = confidence_interval(est, variance, 0.95)
        wide = confidence_interval(est, variance, 0.99)
        assert wide.lower < narrow.lower
        assert wide.upper > narrow.upper

    def test_zero_variance_point_interval(self):
        counts = CountTable(n1=np.array([2, 2]), n0=np.array([2, 2]))
        est = plug_in_estimate(counts)
        ci = confidence_interval(est, plugin_sigma2(counts), 0.95)
        assert ci.degenerate_variance
        assert ci.lower == ci.upper == est.value
        assert ci.contains(est.value)

    def test_level_domain(self, test_model):
        est = self.estimate()
        variance = exact_sigma2(test_model)
        for bad in (0.0, 1.0, -0.1, 2.0):
            with pytest.raises(ValueError, match="level"):
                confidence_interval(est, variance, bad)

    def test_degenerate_estimate_rejected(self, test_model):
        degenerate = plug_in_estimate(
            CountTable(n1=np.array([5, 0]), n0=np.array([2, 3]))
        )
        with pytest.raises(DegenerateSampleError):
            confidence_interval(degenerate, exact_sigma2(test_model), 0.95)

    def test_contains(self):
        est = self.estimate()
        counts = CountTable(n1=np.array([3, 1]), n0=np.array([1, 3]))
        ci = confidence_interval(est, plugin_sigma2(counts), 0.95)
        assert ci.contains(est.value)
        assert not ci.contains(ci.upper + 1.0)
