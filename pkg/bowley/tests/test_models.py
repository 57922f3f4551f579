"""Tests for data model validation."""

import math

import pytest
from pydantic import ValidationError

from bowley.models import (
    CobbDouglas,
    ElasticitySolution,
    EconPanel,
    ExpFit,
    LogisticFit,
    NlsResult,
    ReturnsClass,
    SShaped,
    Termination,
    TripleFit,
    ValidationIssue,
    ValidationReport,
    panel_issues,
)


def make_panel(**overrides):
    values = {
        "years": (1899, 1900, 1901),
        "labor": (100.0, 105.0, 110.0),
        "capital": (100.0, 107.0, 114.0),
        "production": (100.0, 101.0, 112.0),
        "origin_year": 1899,
    }
    values.update(overrides)
    return EconPanel(**values)


class TestEconPanel:
    """Test cases for the EconPanel model."""

    def test_valid_panel(self):
        """Test that a well-formed panel is accepted."""
        panel = make_panel()

        assert len(panel) == 3
        assert panel.t == (0, 1, 2)
        assert panel.column("capital") == (100.0, 107.0, 114.0)

    def test_origin_year_shifts_time_index(self):
        """Test that t counts from the origin year."""
        panel = make_panel(origin_year=1900)

        assert panel.t == (-1, 0, 1)

    def test_unknown_column(self):
        """Test that unknown column names raise KeyError."""
        with pytest.raises(KeyError, match="Unknown panel column"):
            make_panel().column("land")

    def test_year_gap_rejected(self):
        """Test that non-consecutive years are rejected."""
        with pytest.raises(ValidationError, match="year step 1900 -> 1902"):
            make_panel(years=(1899, 1900, 1902))

    def test_non_positive_rejected(self):
        """Test that zero values are rejected."""
        with pytest.raises(ValidationError, match="not positive"):
            make_panel(labor=(100.0, 0.0, 110.0))

    def test_length_mismatch_rejected(self):
        """Test that a short column is rejected."""
        with pytest.raises(ValidationError, match="capital has 2 values"):
            make_panel(capital=(100.0, 107.0))

    def test_too_few_rows_rejected(self):
        """Test that panels need at least three rows."""
        with pytest.raises(ValidationError, match="at least 3"):
            make_panel(
                years=(1899, 1900),
                labor=(1.0, 2.0),
                capital=(1.0, 2.0),
                production=(1.0, 2.0),
            )

    def test_panel_is_frozen(self):
        """Test that panels cannot be mutated."""
        panel = make_panel()

        with pytest.raises(ValidationError):
            panel.origin_year = 1900


class TestPanelIssues:
    """Test cases for collecting every panel violation."""

    def test_collects_all_issues(self):
        """Test that all violations are reported, not only the first."""
        issues = panel_issues(
            (1899, 1901, 1902),
            {
                "labor": (1.0, -1.0, 2.0),
                "capital": (1.0, 2.0, math.nan),
                "production": (1.0, 2.0, 3.0),
            },
        )

        messages = [issue.message for issue in issues]
        assert len(issues) == 3
        assert any("year step" in m for m in messages)
        assert any("labor value" in m for m in messages)
        assert any("capital is not finite" in m for m in messages)

    def test_clean_panel_has_no_issues(self):
        """Test that a valid panel produces no issues."""
        panel = make_panel()

        assert panel_issues(panel.years, panel.columns()) == []

    def test_report_ok_must_match_issues(self):
        """Test the ok flag consistency rule."""
        with pytest.raises(ValidationError, match="ok must be true"):
            ValidationReport(ok=True, issues=(ValidationIssue(message="bad"),))


class TestFitModels:
    """Test cases for growth fit models."""

    def test_exp_fit_from_rate(self):
        """Test building an exponential fit from a rate and a level."""
        fit = ExpFit.from_rate(0.03, 100.0)

        assert fit.c == pytest.approx(math.log(100.0))

    def test_exp_fit_inconsistent_intercept(self):
        """Test that x0 must equal exp(c)."""
        with pytest.raises(ValidationError, match="x0 must equal exp"):
            ExpFit(b=0.03, x0=100.0, c=1.0)

    def test_logistic_fit_above_capacity(self):
        """Test that x0 must lie below N."""
        with pytest.raises(ValidationError, match="below the carrying capacity"):
            LogisticFit(b=0.1, x0=200.0, N=100.0)

    def test_logistic_fit_needs_positive_rate(self):
        """Test that logistic rates are positive."""
        with pytest.raises(ValidationError):
            LogisticFit(b=0.0, x0=1.0, N=100.0)

    def test_triple_fit_rejects_mixed_families(self):
        """Test that a triple mixes no exponential and logistic fits."""
        exp_fit = ExpFit.from_rate(0.03, 100.0)
        logistic = LogisticFit(b=0.1, x0=1.0, N=100.0)

        with pytest.raises(ValidationError, match="share one family"):
            TripleFit(labor=exp_fit, capital=exp_fit, production=logistic)

    def test_triple_fit_rates(self):
        """Test that rates are read in labor, capital, production order."""
        fits = TripleFit(
            labor=ExpFit.from_rate(0.01, 1.0),
            capital=ExpFit.from_rate(0.02, 1.0),
            production=ExpFit.from_rate(0.03, 1.0),
        )

        assert fits.rates == (0.01, 0.02, 0.03)
        assert not fits.is_logistic

    def test_nls_result_converged_matches_termination(self):
        """Test that converged agrees with the termination reason."""
        with pytest.raises(ValidationError, match="termination reason"):
            NlsResult(
                parameters=(1.0,),
                rss=0.0,
                iterations=200,
                converged=True,
                termination=Termination.MAX_ITERATIONS,
            )


class TestProductionModels:
    """Test cases for production function models."""

    def test_crs_solution_must_sum_to_one(self):
        """Test that CRS elasticities sum to one."""
        with pytest.raises(ValidationError, match="sum to one"):
            ElasticitySolution(
                alpha=0.5, beta=0.6, classification=ReturnsClass.CRS_ATTAINABLE
            )

    def test_degenerate_solution_allows_missing_values(self):
        """Test that degenerate solutions may omit the elasticities."""
        solution = ElasticitySolution(classification=ReturnsClass.DEGENERATE)

        assert solution.alpha is None
        assert solution.beta is None

    def test_cobb_douglas_needs_positive_scale(self):
        """Test that A must be positive."""
        with pytest.raises(ValidationError):
            CobbDouglas(A=0.0, alpha=0.7, beta=0.3)

    def test_s_shaped_bounds(self):
        """Test that p lies strictly between 0 and 1."""
        with pytest.raises(ValidationError):
            SShaped(a=1.0, b=0.0, p=1.0)
