"""
SELDA Sim - Runtime Configuration
Loads and validates environment variables for the simulator.
"""

import os
from dotenv import load_dotenv
from typing import Optional

# Load environment variables
load_dotenv()


def _cpu_count() -> int:
    return os.cpu_count() or 1


def _read_threads() -> int:
    """SELDA_SIM_THREADS as an int; 0 when it is set but not a number."""
    raw = os.getenv('SELDA_SIM_THREADS', '').strip()
    if not raw:
        return _cpu_count()
    try:
        return int(raw)
    except ValueError:
        return 0


class Config:
    """Runtime configuration from environment variables."""

    # Parallelism
    SIM_THREADS: int = _read_threads()

    # Output
    OUTPUT_DIR: str = os.getenv('SELDA_SIM_OUTPUT_DIR', 'results')

    # Logging
    DEBUG_MODE: bool = os.getenv('SELDA_SIM_DEBUG', 'false').lower() == 'true'

    @classmethod
    def reload(cls):
        """Re-read the environment (used after the CLI changes it)."""
        cls.SIM_THREADS = _read_threads()
        cls.OUTPUT_DIR = os.getenv('SELDA_SIM_OUTPUT_DIR', 'results')
        cls.DEBUG_MODE = os.getenv('SELDA_SIM_DEBUG', 'false').lower() == 'true'

    @classmethod
    def validate(cls) -> tuple[bool, Optional[str]]:
        """
        Validate the runtime configuration.

        Returns:
            tuple: (is_valid, error_message)
        """
        if cls.SIM_THREADS < 1:
            return False, "SELDA_SIM_THREADS must be a positive integer"

        if not cls.OUTPUT_DIR:
            return False, "SELDA_SIM_OUTPUT_DIR cannot be empty"

        return True, None

    @classmethod
    def max_workers(cls, requested: Optional[int] = None) -> int:
        """Number of sweep workers, capped by SELDA_SIM_THREADS."""
        if requested is None or requested < 1:
            return max(1, cls.SIM_THREADS)
        return max(1, min(requested, cls.SIM_THREADS))

    @classmethod
    def get_debug_info(cls) -> dict:
        """Get configuration info for debugging."""
        return {
            'sim_threads': cls.SIM_THREADS,
            'output_dir': cls.OUTPUT_DIR,
            'debug_mode': cls.DEBUG_MODE
        }
