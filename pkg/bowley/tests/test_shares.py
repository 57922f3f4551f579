"""Tests for factor shares as differential invariants."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bowley.errors import (
    AtCapacity,
    DegenerateFit,
    EmptySeries,
    NonFiniteValue,
    ZeroDenominator,
    ZeroScaleCoefficient,
)
from bowley.growth import eval_exponential, eval_logistic
from bowley.invariants import (
    calibrate_logistic_production,
    eval_cobb_douglas,
    eval_logistic_production,
    eval_s_shaped,
)
from bowley.models import (
    CobbDouglas,
    ExpFit,
    Generator,
    JetPoint,
    LogisticFit,
    LogisticProduction,
    ShareMethod,
    SShaped,
    TripleFit,
)
from bowley.shares import (
    analytic_logistic_share,
    fundamental_invariants,
    logistic_share_trajectory,
    numeric_wage_share,
    prolonged_coefficients,
    share_constancy_report,
    shares_from_invariants,
)

from .conftest import FRED_LPF


def cobb_douglas_jet(cd: CobbDouglas, L: float, K: float) -> JetPoint:
    Y = eval_cobb_douglas(cd, L, K)
    return JetPoint(K=K, L=L, Y=Y, Y_K=cd.beta * Y / K, Y_L=cd.alpha * Y / L)


class TestInvariantShares:
    """Test cases for shares from fundamental invariants."""

    def test_prolonged_coefficients(self):
        """Test the components of the prolonged generator."""
        g = Generator(a=1.0, b=2.0, c=3.0)
        p = JetPoint(K=2.0, L=3.0, Y=4.0, Y_K=5.0, Y_L=6.0)

        np.testing.assert_allclose(
            prolonged_coefficients(g, p), [2.0, 6.0, 12.0, 10.0, 6.0]
        )

    @given(
        alpha=st.floats(0.05, 0.95),
        beta=st.floats(0.05, 0.95),
        L=st.floats(1.0, 500.0),
        K=st.floats(1.0, 500.0),
        b=st.floats(-1.0, 1.0),
        c=st.floats(-1.0, 1.0),
    )
    @settings(max_examples=100, deadline=None)
    def test_invariant_route_gives_exponents(self, alpha, beta, L, K, b, c):
        """Test that invariant shares equal the Cobb-Douglas exponents."""
        cd = CobbDouglas(A=1.0, alpha=alpha, beta=beta)

        report = shares_from_invariants(
            fundamental_invariants(Generator(a=1.0, b=b, c=c), cobb_douglas_jet(cd, L, K))
        )

        assert report.method is ShareMethod.INVARIANTS
        assert report.s_L == pytest.approx(alpha, rel=1e-9)
        assert report.s_K == pytest.approx(beta, rel=1e-9)

    def test_zero_capital_coefficient(self):
        """Test that a = 0 has no invariants in this form."""
        p = JetPoint(K=2.0, L=3.0, Y=4.0, Y_K=5.0, Y_L=6.0)

        with pytest.raises(ZeroScaleCoefficient):
            fundamental_invariants(Generator(a=0.0, b=1.0, c=1.0), p)

    def test_zero_output_invariant(self):
        """Test that I2 = 0 cannot be divided by."""
        with pytest.raises(ZeroDenominator):
            shares_from_invariants([1.0, 0.0, 1.0, 1.0])


class TestNumericShares:
    """Test cases for central-difference shares."""

    def test_cobb_douglas_share(self):
        """Test that numeric shares equal the exponents."""
        cd = CobbDouglas(A=0.4710156, alpha=1.0, beta=0.16114881212)

        report = numeric_wage_share(lambda L, K: eval_cobb_douglas(cd, L, K), 161.0, 431.0)

        assert report.method is ShareMethod.NUMERIC_DERIVATIVE
        assert report.s_L == pytest.approx(1.0, rel=1e-8)
        assert report.s_K == pytest.approx(0.16114881212, rel=1e-8)

    def test_zero_output(self):
        """Test that zero production has no share."""
        with pytest.raises(NonFiniteValue):
            numeric_wage_share(lambda L, K: 0.0, 1.0, 1.0)

    def test_non_finite_output(self):
        """Test that infinite production is rejected."""
        with pytest.raises(NonFiniteValue):
            numeric_wage_share(lambda L, K: math.inf, 1.0, 1.0)

    def test_s_shaped_share_falls_with_capital(self):
        """Test that a saturating surface moves the labor share with capital deepening."""
        s = SShaped(a=1.0, b=1.0, p=0.3)

        def surface(L, K):
            return eval_s_shaped(s, K, L)

        low = numeric_wage_share(surface, 10.0, 10.0).s_L
        high = numeric_wage_share(surface, 10.0, 1000.0).s_L
        assert low != pytest.approx(high, rel=1e-3)


class TestLogisticShares:
    """Test cases for closed-form logistic shares."""

    def setup_method(self):
        """Set up a logistic production function."""
        self.lp = LogisticProduction(
            N_L=175.97, N_K=230.26, N_Y=211.30, C=1.59899336, alpha=0.46780229, beta=0.05955408
        )

    def surface(self, L, K):
        return eval_logistic_production(self.lp, L, K)

    @pytest.mark.parametrize("L, K", [(5.0, 3.0), (60.0, 150.0), (170.0, 229.0)])
    def test_analytic_matches_numeric(self, L, K):
        """Test the closed-form share against central differences."""
        analytic = analytic_logistic_share(self.lp, L, K)
        numeric = numeric_wage_share(self.surface, L, K).s_L

        assert analytic == pytest.approx(numeric, rel=1e-7)

    def test_at_capacity(self):
        """Test that L = N_L has no share."""
        with pytest.raises(AtCapacity):
            analytic_logistic_share(self.lp, self.lp.N_L, 10.0)

    def test_small_inputs_approach_alpha(self):
        """Test that far below capacity the share tends to alpha."""
        share = analytic_logistic_share(self.lp, 1e-6, 1e-6)

        assert share == pytest.approx(self.lp.alpha, rel=1e-4)


class TestShareTrajectory:
    """Test cases for the labor share along logistic flows."""

    def setup_method(self):
        """Set up consistent logistic flows and their production function."""
        self.alpha, self.beta = 0.5, 0.3
        self.labor = LogisticFit(b=0.08, x0=2.0, N=176.0)
        self.capital = LogisticFit(b=0.07, x0=1.6, N=230.0)
        self.production = LogisticFit(
            b=self.alpha * self.labor.b + self.beta * self.capital.b, x0=11.3, N=211.0
        )
        self.fits = TripleFit(labor=self.labor, capital=self.capital, production=self.production)

    def test_trajectory_with_alpha_matches_composition(self):
        """Test the closed-form trajectory against the analytic share on the flows."""
        lp = calibrate_logistic_production(
            self.labor, self.capital, self.production, self.alpha, self.beta
        )
        grid = np.linspace(0.0, 40.0, 41)

        trajectory = logistic_share_trajectory(self.fits, grid, alpha=self.alpha)

        composed = [
            analytic_logistic_share(lp, eval_logistic(self.labor, t), eval_logistic(self.capital, t))
            for t in grid
        ]
        np.testing.assert_allclose(trajectory, composed, rtol=1e-10)

    def test_default_prefactor_is_rate_ratio(self):
        """Test that without alpha the prefactor is b3 / b1."""
        grid = [0.0, 10.0, 20.0]

        default = logistic_share_trajectory(self.fits, grid)
        unit = logistic_share_trajectory(self.fits, grid, alpha=1.0)

        ratio = self.production.b / self.labor.b
        np.testing.assert_allclose(default, ratio * unit, rtol=1e-14)

    def test_initial_value(self):
        """Test the share at t = 0."""
        share = logistic_share_trajectory(self.fits, [0.0], alpha=self.alpha)[0]

        expected = self.alpha * self.labor.N / (self.labor.N - self.labor.x0) * (
            (self.production.N - self.production.x0) / self.production.N
        )
        assert share == pytest.approx(expected, rel=1e-12)

    def test_fred_trajectory_is_not_constant(self, fred_logistic_fits):
        """Test that the published FRED flows give a visibly varying share."""
        trajectory = logistic_share_trajectory(fred_logistic_fits, np.arange(70.0))

        assert np.all(trajectory > 0)
        assert trajectory.max() / trajectory.min() > 1.01

    def test_fred_trajectory_matches_composition(self, fred_logistic_fits):
        """Test the composed share on the published flows with an orthogonal beta."""
        labor = fred_logistic_fits.labor
        capital = fred_logistic_fits.capital
        production = fred_logistic_fits.production
        alpha = FRED_LPF.alpha
        beta = (production.b - alpha * labor.b) / capital.b
        lp = calibrate_logistic_production(labor, capital, production, alpha, beta)
        grid = np.arange(70.0)

        trajectory = logistic_share_trajectory(fred_logistic_fits, grid, alpha=alpha)

        composed = [
            analytic_logistic_share(lp, eval_logistic(labor, t), eval_logistic(capital, t))
            for t in grid
        ]
        np.testing.assert_allclose(trajectory, composed, rtol=1e-10)

    def test_exponential_fits_rejected(self):
        """Test that the trajectory needs logistic fits."""
        fits = TripleFit(
            labor=ExpFit.from_rate(0.02, 1.0),
            capital=ExpFit.from_rate(0.06, 1.0),
            production=ExpFit.from_rate(0.03, 1.0),
        )

        with pytest.raises(DegenerateFit, match="logistic"):
            logistic_share_trajectory(fits, [0.0])

    def test_unconverged_fits_rejected(self):
        """Test that unconverged fits are refused."""
        fits = self.fits.model_copy(
            update={"labor": self.labor.model_copy(update={"converged": False})}
        )

        with pytest.raises(DegenerateFit, match="converged"):
            logistic_share_trajectory(fits, [0.0])


class TestConstancyReport:
    """Test cases for share constancy along flows."""

    def test_bowley_law_along_exponential_flows(self):
        """Test that a Cobb-Douglas share stays at alpha on exponential flows."""
        cd = CobbDouglas(A=1.0, alpha=0.7341175376, beta=0.2658824627)
        labor = ExpFit.from_rate(0.02549605, 100.0)
        capital = ExpFit.from_rate(0.06472564, 100.0)

        summary = share_constancy_report(
            lambda L, K: eval_cobb_douglas(cd, L, K),
            lambda t: eval_exponential(labor, t),
            lambda t: eval_exponential(capital, t),
            np.linspace(0.0, 23.0, 24),
        )

        assert summary.count == 24
        assert summary.mean == pytest.approx(cd.alpha, rel=1e-8)
        assert summary.relative_range < 1e-8

    def test_logistic_share_varies(self):
        """Test that the logistic production share moves along logistic flows."""
        labor = LogisticFit(b=0.08, x0=2.0, N=176.0)
        capital = LogisticFit(b=0.07, x0=1.6, N=230.0)
        lp = LogisticProduction(N_L=176.0, N_K=230.0, N_Y=211.0, C=1.6, alpha=0.5, beta=0.3)

        summary = share_constancy_report(
            lambda L, K: eval_logistic_production(lp, L, K),
            lambda t: eval_logistic(labor, t),
            lambda t: eval_logistic(capital, t),
            np.linspace(0.0, 60.0, 31),
        )

        assert summary.relative_range > 0.05
        assert summary.minimum <= summary.mean <= summary.maximum

    def test_constant_shares_report_exact_mean(self):
        """Test that identical shares give a mean equal to that share."""
        summary = share_constancy_report(
            lambda L, K: L * K, lambda t: 2.0, lambda t: 3.0, [0.0, 1.0, 2.0]
        )

        assert summary.mean == summary.minimum == summary.maximum
        assert summary.max_abs_deviation == 0.0
        assert summary.relative_range == 0.0

    def test_empty_grid(self):
        """Test that an empty time grid is rejected."""
        with pytest.raises(EmptySeries):
            share_constancy_report(lambda L, K: L * K, lambda t: 1.0, lambda t: 1.0, [])
