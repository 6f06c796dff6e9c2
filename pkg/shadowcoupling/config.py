"""
Runtime configuration.

Settings come from the environment, optionally seeded from a ``.env`` file in
the project root. Getters read ``os.getenv`` on every call so tests can
monkeypatch the environment.
"""

import os
import logging

try:
    from dotenv import load_dotenv
    load_dotenv(os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), ".env"))
except ImportError:
    pass

# ============================================================================
# CONFIGURATION
# ============================================================================

USTAR_CERTIFICATE_STEPS = 10
DEFAULT_GRID = 64
DEFAULT_SEED = 20240601
BRUTE_FORCE_MAX_DENOMINATOR = 12
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

_TRUE = {"1", "true", "yes", "on"}


def checks_enabled() -> bool:
    """Whether postcondition cross-checks run (SHADOW_CHECKS, default on)."""
    return os.getenv("SHADOW_CHECKS", "1").strip().lower() in _TRUE


def get_log_level(default: str = "WARNING") -> int:
    name = os.getenv("SHADOW_LOG_LEVEL", default).strip().upper()
    return getattr(logging, name, logging.WARNING)


def get_output_dir() -> str:
    return os.getenv("SHADOW_OUTPUT_DIR", "output")


def get_seed() -> int:
    raw = os.getenv("SHADOW_SEED")
    if raw is None or not raw.strip():
        return DEFAULT_SEED
    return int(raw)


def get_brute_force_max_atoms() -> int:
    return int(os.getenv("SHADOW_BRUTE_FORCE_MAX_ATOMS", "4"))


def configure_logging(default_level: str = "WARNING") -> None:
    """basicConfig for entry points; logs go to stderr."""
    logging.basicConfig(level=get_log_level(default_level), format=LOG_FORMAT)
