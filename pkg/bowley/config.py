"""Configuration management for bowley analyses."""

import os
from dataclasses import dataclass

from .models import NlsOptions

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class BowleyConfig:
    """Configuration for fitting and verification runs."""

    # Logging configuration
    log_level: str = "INFO"

    # Concurrency for per-series fits
    max_workers: int = 3

    # Numerical tolerances
    derivative_step: float = 1e-6
    tie_tolerance: float = 1e-12

    # Levenberg-Marquardt defaults
    max_iterations: int = 200
    gradient_tolerance: float = 1e-10
    step_tolerance: float = 1e-12
    initial_damping: float = 1e-3

    @classmethod
    def from_env(cls) -> "BowleyConfig":
        """Create configuration from environment variables.

        Only settings that cannot change numeric results are read, so reports
        stay reproducible across environments.
        """
        return cls(
            log_level=os.getenv("BOWLEY_LOG_LEVEL", "INFO"),
            max_workers=int(os.getenv("BOWLEY_MAX_WORKERS", "3")),
        )

    def validate(self) -> None:
        """Validate configuration settings."""
        if self.log_level.upper() not in LOG_LEVELS:
            raise ValueError(f"Log level must be one of: {list(LOG_LEVELS)}")

        if self.max_workers <= 0:
            raise ValueError("Max workers must be positive")

        if self.derivative_step <= 0 or self.tie_tolerance <= 0:
            raise ValueError("Tolerances must be positive")

        if self.max_iterations <= 0:
            raise ValueError("Max iterations must be positive")

        if min(self.gradient_tolerance, self.step_tolerance, self.initial_damping) <= 0:
            raise ValueError("Solver tolerances must be positive")

    def nls_options(self) -> NlsOptions:
        """Solver options built from this configuration."""
        return NlsOptions(
            max_iterations=self.max_iterations,
            gradient_tolerance=self.gradient_tolerance,
            step_tolerance=self.step_tolerance,
            initial_damping=self.initial_damping,
        )


# Global configuration instance
config = BowleyConfig.from_env()
