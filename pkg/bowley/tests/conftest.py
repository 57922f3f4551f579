"""Shared test fixtures for bowley tests."""

import math
import os
from pathlib import Path

import numpy as np
import pytest

from bowley.checks import synthetic_panel
from bowley.models import EconPanel, LogisticFit, LogisticProduction, TripleFit
from bowley.series import read_panel

# Exact exponential rates used for noise-free panels
EXACT_RATES = (0.02549605, 0.06472564, 0.03592651)

# Logistic flows that approach their capacities within 24 rows
LOGISTIC_LABOR = LogisticFit(b=0.25, x0=10.0, N=120.0)
LOGISTIC_CAPITAL = LogisticFit(b=0.2, x0=15.0, N=250.0)
LOGISTIC_PRODUCTION = LogisticFit(b=0.22, x0=12.0, N=180.0)

# Published logistic fits of the FRED 1947-2016 panel, t = 0 at 1947
FRED_LABOR = LogisticFit(b=0.07842367, x0=2.092004, N=175.97, rss=508.0948)
FRED_CAPITAL = LogisticFit(b=0.07793777, x0=1.575667, N=230.26, rss=299.7033)
FRED_PRODUCTION = LogisticFit(b=0.04619786, x0=11.312991, N=211.30, rss=419.7767)
FRED_CAPACITIES = (FRED_LABOR.N, FRED_CAPITAL.N, FRED_PRODUCTION.N)

# Published logistic production function for those capacities
FRED_LPF = LogisticProduction(
    N_L=FRED_LABOR.N,
    N_K=FRED_CAPITAL.N,
    N_Y=FRED_PRODUCTION.N,
    C=1.59899336,
    alpha=0.46780229,
    beta=0.05955408,
)
FRED_LPF_RSS = 428.27


def exponential_panel(rates=EXACT_RATES, levels=(100.0, 100.0, 100.0), rows=24):
    """Noise-free exponential panel starting in 1899."""
    t = np.arange(rows, dtype=float)
    labor, capital, production = (
        tuple(float(v) for v in x0 * np.exp(b * t))
        for b, x0 in zip(rates, levels, strict=True)
    )
    return EconPanel(
        years=tuple(1899 + i for i in range(rows)),
        labor=labor,
        capital=capital,
        production=production,
        origin_year=1899,
    )


def logistic_values(fit: LogisticFit, rows: int = 24) -> tuple[float, ...]:
    return tuple(
        fit.N * fit.x0 / (fit.x0 + (fit.N - fit.x0) * math.exp(-fit.b * t))
        for t in range(rows)
    )


def panel_csv(panel: EconPanel) -> bytes:
    """Render a panel as CSV bytes with round-trippable floats."""
    lines = ["year,labor,capital,production"]
    for year, L, K, Y in zip(
        panel.years, panel.labor, panel.capital, panel.production, strict=True
    ):
        lines.append(f"{year},{L!r},{K!r},{Y!r}")
    return ("\n".join(lines) + "\n").encode("utf-8")


@pytest.fixture(scope="session")
def exact_panel():
    """Exponential panel with the canonical growth rates and no noise."""
    return exponential_panel()


@pytest.fixture(scope="session")
def noisy_panel():
    """Seeded synthetic panel with lognormal noise."""
    return synthetic_panel(seed=0)


@pytest.fixture(scope="session")
def logistic_panel():
    """Noise-free logistic panel for labor, capital and production."""
    return EconPanel(
        years=tuple(1899 + i for i in range(24)),
        labor=logistic_values(LOGISTIC_LABOR),
        capital=logistic_values(LOGISTIC_CAPITAL),
        production=logistic_values(LOGISTIC_PRODUCTION),
        origin_year=1899,
    )


@pytest.fixture
def panel_file(tmp_path, exact_panel):
    """CSV file holding the exact exponential panel."""
    path = tmp_path / "panel.csv"
    path.write_bytes(panel_csv(exact_panel))
    return path


@pytest.fixture
def write_csv(tmp_path):
    """Factory writing raw CSV text to a temporary file."""

    def _write(text: str, name: str = "input.csv") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


def _canonical(variable: str) -> EconPanel:
    path = os.getenv(variable)
    if not path or not Path(path).is_file():
        pytest.skip(f"{variable} does not point at a panel CSV")
    return read_panel(path)


@pytest.fixture(scope="session")
def cobb_douglas_panel():
    """User-supplied 1899-1922 panel, skipped when BOWLEY_CD_CSV is unset."""
    return _canonical("BOWLEY_CD_CSV")


@pytest.fixture(scope="session")
def fred_panel():
    """User-supplied FRED panel, skipped when BOWLEY_FRED_CSV is unset."""
    return _canonical("BOWLEY_FRED_CSV")


@pytest.fixture(scope="session")
def fred_logistic_fits():
    """Published logistic fits of the FRED panel as a TripleFit."""
    return TripleFit(labor=FRED_LABOR, capital=FRED_CAPITAL, production=FRED_PRODUCTION)


@pytest.fixture
def noisy_panel_file(tmp_path, noisy_panel):
    """CSV file holding the seeded synthetic panel."""
    path = tmp_path / "noisy.csv"
    path.write_bytes(panel_csv(noisy_panel))
    return path


@pytest.fixture(scope="session")
def noisy_logistic_panel(logistic_panel):
    """Logistic panel with 1% lognormal noise on every value."""
    rng = np.random.default_rng(11)
    noisy = {
        name: tuple(float(v) for v in np.asarray(values) * rng.lognormal(0.0, 0.01, 24))
        for name, values in logistic_panel.columns().items()
    }
    return logistic_panel.model_copy(update=noisy)


@pytest.fixture
def logistic_panel_file(tmp_path, noisy_logistic_panel):
    """CSV file holding the noisy logistic panel."""
    path = tmp_path / "logistic.csv"
    path.write_bytes(panel_csv(noisy_logistic_panel))
    return path
