"""Tests for the executable property suites."""

import numpy as np
import pytest

from bowley.checks import (
    check_bowley_exponential,
    check_elasticity_line,
    check_exponential_non_invariance,
    check_logistic_share_oracle,
    check_prolongation_annihilation,
    run_property_checks,
    synthetic_panel,
)
from bowley.growth import fit_panel_exponential
from bowley.models import ExpFit, LogisticFit, TripleFit

EXPECTED_CHECKS = {
    "exponential_invariance",
    "exponential_non_invariance",
    "logistic_invariance",
    "logistic_non_invariance",
    "prolongation_annihilation",
    "share_route_agreement",
    "cobb_douglas_homogeneity",
    "psi_round_trip",
    "pushforward_identity",
    "logistic_limit",
    "elasticity_line",
    "bowley_exponential",
    "logistic_share_oracle",
}


class TestSyntheticPanel:
    """Test cases for the seeded synthetic panel."""

    def test_deterministic_for_seed(self):
        """Test that one seed always gives the same panel."""
        assert synthetic_panel(7) == synthetic_panel(7)
        assert synthetic_panel(7) != synthetic_panel(8)

    def test_shape(self):
        """Test the panel layout."""
        panel = synthetic_panel()

        assert len(panel) == 24
        assert panel.years[0] == 1899
        assert panel.t[0] == 0


class TestPropertySuites:
    """Test cases for the property checks."""

    def test_all_checks_pass_on_synthetic_panel(self):
        """Test that every suite passes with the default seed."""
        checks = run_property_checks(seed=0, samples=25)

        assert {check.name for check in checks} == EXPECTED_CHECKS
        failed = [(c.name, c.metric, c.tolerance) for c in checks if not c.passed]
        assert failed == []

    def test_checks_pass_on_supplied_panel(self, exact_panel):
        """Test that a supplied panel replaces the synthetic one."""
        checks = run_property_checks(exact_panel, seed=3, samples=10)

        assert all(check.passed for check in checks)

    def test_checks_are_reproducible(self):
        """Test that the same seed gives identical metrics."""
        first = run_property_checks(seed=5, samples=5)
        second = run_property_checks(seed=5, samples=5)

        assert [c.metric for c in first] == [c.metric for c in second]

    def test_non_invariance_margin(self):
        """Test that skewed exponents move the invariant measurably."""
        check = check_exponential_non_invariance(np.random.default_rng(1), 50)

        assert check.passed
        assert check.metric >= check.tolerance

    def test_prolongation_annihilation(self):
        """Test the prolonged generator against its invariants."""
        check = check_prolongation_annihilation(np.random.default_rng(2), 50)

        assert check.passed

    def test_elasticity_line_on_tied_rates(self):
        """Test that tied input rates pass with an explanation."""
        fits = TripleFit(
            labor=ExpFit.from_rate(0.03, 1.0),
            capital=ExpFit.from_rate(0.03, 1.0),
            production=ExpFit.from_rate(0.04, 1.0),
        )

        check = check_elasticity_line(fits)

        assert check.passed
        assert "tie" in check.detail

    def test_elasticity_line_reports_classification(self, exact_panel):
        """Test that the classification is recorded in the detail."""
        check = check_elasticity_line(fit_panel_exponential(exact_panel))

        assert check.detail == "CrsAttainable"

    def test_bowley_check_needs_exponential_fits(self):
        """Test that logistic fits are refused."""
        fit = LogisticFit(b=0.1, x0=1.0, N=10.0)
        fits = TripleFit(labor=fit, capital=fit, production=fit)

        with pytest.raises(TypeError):
            check_bowley_exponential(fits)

    def test_logistic_share_oracle(self):
        """Test the closed-form share trajectory oracle."""
        check = check_logistic_share_oracle()

        assert check.passed
        assert check.metric <= 1e-10
