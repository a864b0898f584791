"""
SELDA Sim - Results Store
Handles all result files of a study inside one output directory.
"""

from pathlib import Path
from typing import Dict, List, Optional, Union
import logging
import re

import pandas as pd

from src.errors import ResultsIOError
from src.experiments.trial import TrajectoryLog
from src.output.csv_io import (
    read_frame_csv,
    read_log_csv,
    write_frame_csv,
    write_log_csv,
    write_stiffness_csv,
    write_summary_csv,
)
from src.physics.elastics import StiffnessCharacterization

logger = logging.getLogger(__name__)

SUMMARY_FILE = 'summary.csv'
STEPS_FILE = 'steps.csv'
STIFFNESS_FILE = 'stiffness.csv'

_UNSAFE = re.compile(r'[^A-Za-z0-9_.-]+')


def trial_file_name(config: str, label: str) -> str:
    """trial_<config>_<label>.csv with the label reduced to file-safe characters."""
    safe_label = _UNSAFE.sub('_', str(label)).strip('_') or 'trial'
    return f"trial_{config}_{safe_label}.csv"


class ResultsStore:
    """Manages the CSV files of one output directory."""

    def __init__(self, out_dir: Union[str, Path]):
        """
        Open an output directory, creating it when missing.

        Args:
            out_dir: Directory holding trial logs and summaries
        """
        self.out_dir = Path(out_dir)
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
            logger.debug(f"Results directory ready: {self.out_dir}")
        except OSError as e:
            logger.error(f"Failed to create results directory: {e}")
            raise ResultsIOError(str(self.out_dir), f"Cannot create output directory ({e.strerror or e})")

    def path_for(self, name: str) -> Path:
        return self.out_dir / name

    # ==================== Trial Log Operations ====================

    def save_trial_log(self, log: TrajectoryLog, config: Optional[str] = None,
                       label: Optional[str] = None) -> Path:
        """
        Save a trajectory log.

        Args:
            log: Log to save
            config: Leg configuration; defaults to the log metadata
            label: Trial label; defaults to the log metadata

        Returns:
            Path of the written file
        """
        config = config or log.metadata.get('leg_config', 'X')
        label = label or log.metadata.get('label', 'trial')
        path = self.path_for(trial_file_name(config, label))
        try:
            return write_log_csv(log, path)
        except ResultsIOError as e:
            logger.error(f"Failed to save trial log: {e}")
            raise

    def load_trial_log(self, config: str, label: str) -> TrajectoryLog:
        """
        Load a trajectory log saved by save_trial_log.

        Raises:
            ResultsIOError: if the file is missing or malformed
        """
        path = self.path_for(trial_file_name(config, label))
        try:
            return read_log_csv(path)
        except ResultsIOError as e:
            logger.error(f"Failed to load trial log: {e}")
            raise

    def list_trial_logs(self) -> List[Path]:
        """Trial log files in name order."""
        return sorted(self.out_dir.glob('trial_*.csv'))

    # ==================== Summary Operations ====================

    def save_summary(self, summary: pd.DataFrame, metadata: Optional[Dict[str, str]] = None) -> Path:
        try:
            return write_summary_csv(summary, self.path_for(SUMMARY_FILE), metadata)
        except ResultsIOError as e:
            logger.error(f"Failed to save summary: {e}")
            raise

    def load_summary(self) -> pd.DataFrame:
        try:
            frame, _ = read_frame_csv(self.path_for(SUMMARY_FILE))
            return frame
        except ResultsIOError as e:
            logger.error(f"Failed to load summary: {e}")
            raise

    def save_steps(self, steps: pd.DataFrame, metadata: Optional[Dict[str, str]] = None) -> Path:
        """Save the per-step table used by distribution plots."""
        try:
            return write_frame_csv(steps, self.path_for(STEPS_FILE), metadata)
        except ResultsIOError as e:
            logger.error(f"Failed to save step table: {e}")
            raise

    # ==================== Characterization Operations ====================

    def save_stiffness_curve(self, result: StiffnessCharacterization, path: Optional[Union[str, Path]] = None,
                             metadata: Optional[Dict[str, str]] = None) -> Path:
        """
        Save a stiffness characterization.

        Args:
            result: Characterization to save
            path: Explicit file; defaults to stiffness.csv in the output directory
            metadata: Extra header lines

        Returns:
            Path of the written file
        """
        target = Path(path) if path is not None else self.path_for(STIFFNESS_FILE)
        try:
            return write_stiffness_csv(result, target, metadata)
        except ResultsIOError as e:
            logger.error(f"Failed to save stiffness curve: {e}")
            raise
