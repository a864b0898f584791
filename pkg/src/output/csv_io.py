"""
SELDA Sim - CSV Files
Writes and reads trajectory logs, summaries and stiffness curves.

Every file starts with '# key: value' metadata lines followed by a single
header line. Floats are written with 17 significant digits so that reading
a file back reproduces every value bit for bit.
"""

from pathlib import Path
from typing import Dict, Optional, Tuple, Union
import logging

import pandas as pd

from src.errors import ResultsIOError
from src.experiments.trial import TrajectoryLog
from src.physics.elastics import StiffnessCharacterization

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'

PathLike = Union[str, Path]


def write_frame_csv(frame: pd.DataFrame, path: PathLike, metadata: Optional[Dict[str, str]] = None) -> Path:
    """
    Write a DataFrame with leading metadata comment lines.

    Args:
        frame: Data to write
        path: Destination file; parent directories are created
        metadata: Key/value pairs written before the header

    Returns:
        Path written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            for key, value in (metadata or {}).items():
                handle.write(f"# {key}: {value}\n")
            frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    except OSError as e:
        logger.error(f"Failed to write {path}: {e}")
        raise ResultsIOError(str(path), f"Failed to write CSV ({e.strerror or e})")
    logger.debug(f"Wrote {len(frame)} rows to {path}")
    return path


def read_frame_csv(path: PathLike) -> Tuple[pd.DataFrame, Dict[str, str]]:
    """
    Read a CSV written by write_frame_csv.

    Returns:
        Tuple of (frame, metadata)
    """
    path = Path(path)
    metadata: Dict[str, str] = {}
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            for line in handle:
                if not line.startswith('#'):
                    break
                key, _, value = line[1:].partition(':')
                metadata[key.strip()] = value.strip()
        frame = pd.read_csv(path, comment='#', float_precision='round_trip')
    except OSError as e:
        logger.error(f"Failed to read {path}: {e}")
        raise ResultsIOError(str(path), f"Failed to read CSV ({e.strerror or e})")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        logger.error(f"Failed to parse {path}: {e}")
        raise ResultsIOError(str(path), f"Malformed CSV ({e})")
    return frame, metadata


def write_log_csv(log: TrajectoryLog, path: PathLike) -> Path:
    """Write a trajectory log; an empty log gives a header-only file."""
    return write_frame_csv(log.frame, path, log.metadata)


def read_log_csv(path: PathLike) -> TrajectoryLog:
    frame, metadata = read_frame_csv(path)
    # whole-number columns such as a zero torque come back as integers
    return TrajectoryLog(frame.astype(float), metadata)


def write_summary_csv(summary: pd.DataFrame, path: PathLike,
                      metadata: Optional[Dict[str, str]] = None) -> Path:
    """Write the one-row-per-trial summary table."""
    return write_frame_csv(summary, path, metadata)


def stiffness_frame(result: StiffnessCharacterization) -> pd.DataFrame:
    return pd.DataFrame({'motor_angle': result.angles, 'torque': result.torques})


def write_stiffness_csv(result: StiffnessCharacterization, path: PathLike,
                        metadata: Optional[Dict[str, str]] = None) -> Path:
    """
    Write a stiffness characterization as two columns, angle and torque.

    The fitted stiffness and offset go into the metadata lines.
    """
    header = {
        'fitted_stiffness_nm_per_rad': repr(result.stiffness),
        'fitted_offset_nm': repr(result.offset),
        'r_value': repr(result.r_value),
        'units': 'motor_angle [rad], torque [N*m]',
    }
    header.update(metadata or {})
    return write_frame_csv(stiffness_frame(result), path, header)
