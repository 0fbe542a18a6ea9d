"""
This module manages the application's configuration settings.

It loads environment variables using `dotenv` and defines a `Config` class
to centralize access to the audit defaults (radix, seed, Monte Carlo sample
count, quantile level, grid size, capacity limit and log level).
"""
import logging
import os
from dotenv import load_dotenv

load_dotenv()

LOG_FORMAT = "[%(levelname)s] [%(name)s] %(message)s"


class Config:
    """
    Centralized configuration class for the audit library, CLI and HTTP app.

    Every attribute is read once from the environment, with the defaults the
    command-line flags fall back to.
    """
    # --- Numerics ---
    BASE = int(os.getenv('BENFORD_BASE', 10))
    """Default radix for digit and mod-1 computations."""
    SEED = int(os.getenv('BENFORD_SEED', 0))
    """Default seed of the Monte Carlo streams."""
    SAMPLES = int(os.getenv('BENFORD_SAMPLES', 1_000_000))
    """Default number of Monte Carlo draws."""
    ALPHA = float(os.getenv('BENFORD_ALPHA', 0.25))
    """Default quantile level of the quantile spread (0.25 gives the IQR)."""
    GRID = int(os.getenv('BENFORD_GRID', 4096))
    """Default size of the phase grid of the uniform-law curve."""

    # --- Capacity ---
    MAX_ATOMS = int(os.getenv('BENFORD_MAX_ATOMS', 1_000_000))
    """Largest N for which UniformIntegers(N) stores its atoms exactly."""

    # --- Logging ---
    LOG_LEVEL = os.getenv('BENFORD_LOG_LEVEL', 'INFO').upper()
    """Level of the root logger configured by the CLI and the app."""


# Instantiate config
settings = Config()
"""An instance of the Config class, providing easy access to application settings."""


def configure_logging(level: str = None) -> None:
    """
    Configures the root logger once for the CLI and the HTTP app.

    Args:
        level (str, optional): Logging level name. Defaults to `settings.LOG_LEVEL`.
    """
    logging.basicConfig(level=(level or settings.LOG_LEVEL), format=LOG_FORMAT)
