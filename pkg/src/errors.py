"""
SELDA Sim - Exceptions
Error hierarchy shared by the library and the command-line layer.
"""

from typing import Any, Dict, Optional


class SeldaSimError(Exception):
    """Base class for all simulator errors."""


# ==================== Configuration ====================

class ConfigError(SeldaSimError, ValueError):
    """Configuration could not be loaded or is invalid."""


class ConfigFileNotFoundError(ConfigError, FileNotFoundError):
    """Configuration file does not exist."""

    def __init__(self, path: str):
        self.path = str(path)
        super().__init__(f"Config file not found: {self.path}")


class ConfigParseError(ConfigError):
    """Configuration file is malformed."""

    def __init__(self, path: str, line_no: int, message: str):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{self.path}:{line_no}: {message}")


class ConfigValidationError(ConfigError):
    """A parameter violates one of its invariants."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(message if message.startswith(f"{key}:") else f"{key}: {message}")

    @classmethod
    def from_validator(cls, error: str) -> 'ConfigValidationError':
        """Build from a validator message of the form '<key>: <reason>'."""
        key, _, _ = error.partition(':')
        return cls(key.strip(), error)


# ==================== Simulation ====================

class SimulationError(SeldaSimError):
    """A trial could not be completed."""


class NonFiniteStateError(SimulationError):
    """Integration produced NaN or infinite values."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None,
                 partial_log: Any = None):
        self.diagnostics = diagnostics or {}
        self.partial_log = partial_log
        super().__init__(message)


class MassMatrixError(SimulationError):
    """Mass matrix is singular at the given state."""

    def __init__(self, message: str, state_dump: Optional[Dict[str, Any]] = None):
        self.state_dump = state_dump or {}
        super().__init__(message)


# ==================== Analysis ====================

class InsufficientStepsError(SeldaSimError, ValueError):
    """Too few complete steps in the analysis window."""

    def __init__(self, found: int, required: int = 1):
        self.found = found
        self.required = required
        super().__init__(f"Need at least {required} complete step(s) in the analysis window, found {found}")


# ==================== Output ====================

class ResultsIOError(SeldaSimError, OSError):
    """Reading or writing a result file failed."""

    def __init__(self, path: str, message: str):
        self.path = str(path)
        super().__init__(f"{message}: {self.path}")
