import numpy as np
import pytest
from scipy.special import kolmogorov as scipy_kolmogorov_sf

from varbreak import DecisionRule, kolmogorov_cdf, kolmogorov_quantile, pvalue


class TestCdf:
    def test_at_zero(self):
        assert kolmogorov_cdf(0.0) == 0.0

    def test_far_tail(self):
        assert kolmogorov_cdf(10.0) == pytest.approx(1.0, abs=1e-12)

    def test_ninety_five_percent_point(self):
        assert kolmogorov_cdf(1.3581) == pytest.approx(0.95, abs=2e-4)

    def test_negative_argument(self):
        with pytest.raises(ValueError):
            kolmogorov_cdf(-0.1)

    def test_monotone_and_bounded_on_grid(self):
        grid = np.linspace(0.0, 3.0, 1000)
        values = [kolmogorov_cdf(x) for x in grid]
        assert all(0.0 <= v <= 1.0 for v in values)
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_against_scipy_survival_function(self):
        for x in np.linspace(0.3, 2.5, 45):
            assert kolmogorov_cdf(float(x)) == pytest.approx(
                1.0 - float(scipy_kolmogorov_sf(x)), abs=1e-9
            )


class TestQuantile:
    def test_ninety_five_percent(self):
        assert kolmogorov_quantile(0.95) == pytest.approx(1.3581, abs=5e-4)

    def test_round_trip_through_cdf(self):
        assert kolmogorov_quantile(kolmogorov_cdf(1.0)) == pytest.approx(1.0, abs=1e-8)

    def test_median_bracket(self):
        assert 0.8 < kolmogorov_quantile(0.5) < 0.9

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.2, 1.4])
    def test_domain(self, p):
        with pytest.raises(ValueError):
            kolmogorov_quantile(p)

    def test_identity_on_grid(self):
        for x in np.linspace(0.3, 2.5, 23):
            assert kolmogorov_quantile(kolmogorov_cdf(float(x))) == pytest.approx(
                float(x), abs=1e-8
            )

    def test_inversion_tolerance(self):
        for p in (0.01, 0.5, 0.9, 0.95, 0.99):
            assert abs(kolmogorov_cdf(kolmogorov_quantile(p)) - p) < 1e-10


class TestPvalue:
    def test_at_zero(self):
        assert pvalue(0.0) == 1.0

    def test_at_the_boundary(self):
        assert pvalue(1.3581) == pytest.approx(0.05, abs=2e-4)

    def test_large_statistic(self):
        assert pvalue(4.14) < 0.001

    def test_negative_statistic(self):
        with pytest.raises(ValueError):
            pvalue(-1.0)


class TestDecisionRule:
    def test_asymptotic_computes_the_quantile(self):
        rule = DecisionRule.asymptotic(0.05)
        assert rule.critical_value == pytest.approx(1.3581, abs=5e-4)
        assert rule.source == "asymptotic"
        assert rule.level == 0.05

    def test_fixed_boundary_is_133(self):
        rule = DecisionRule.fixed_boundary()
        assert rule.critical_value == 1.33
        assert rule.source == "boundary"

    def test_the_two_rules_differ(self):
        assert DecisionRule.asymptotic(0.05).critical_value != DecisionRule.fixed_boundary().critical_value

    def test_rejection_is_strict(self):
        rule = DecisionRule.user(2.0)
        assert not rule.rejects(2.0)
        assert rule.rejects(2.0000001)

    def test_validation(self):
        with pytest.raises(ValueError):
            DecisionRule.user(-1.0)
        with pytest.raises(ValueError):
            DecisionRule(1.0, 0.05, "folklore")
