"""
Growth-model invariants for labor, capital and production time series.

This package fits exponential and logistic flows to economic panels, derives
Cobb-Douglas and logistic production functions as invariants of those flows,
and checks numerically whether the wage share stays constant (Bowley's law).
"""

__version__ = "0.1.0"
