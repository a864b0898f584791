"""
SELDA Sim - Parameter File Loader
Reads key = value parameter files, converts units to SI and validates the result.

Files use the dotenv syntax:

    # configuration B, passive foot
    leg_config = B
    knee_stiffness = 10.9 N/mm
    resting_joint_angles = 130, 160, 175 deg
    integrator = rk4
"""

import dataclasses
import hashlib
import logging
import math
import re
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple, Union, get_type_hints

from dotenv import dotenv_values

from src.errors import ConfigError, ConfigFileNotFoundError, ConfigParseError, ConfigValidationError
from src.model.params import ControllerConfig, LegConfig, RobotParams, SimSettings, default_params
from src.utils.validators import (
    sanitize_input,
    validate_controller_config,
    validate_robot_params,
    validate_sim_settings,
)

logger = logging.getLogger(__name__)

ParameterSet = Tuple[RobotParams, SimSettings, ControllerConfig]

# Unit suffix -> factor to SI
UNIT_SCALE: Dict[str, float] = {
    'm': 1.0, 'mm': 1e-3, 'cm': 1e-2,
    'kg': 1.0, 'g': 1e-3,
    'n/m': 1.0, 'n/mm': 1e3,
    'rad': 1.0, 'deg': math.pi / 180.0, '°': math.pi / 180.0,
    's': 1.0, 'ms': 1e-3, 'hz': 1.0,
    'bar': 1e5, 'pa': 1.0,
    'nm': 1.0, 'n*m': 1.0,
    'nm/rad': 1.0, 'n*m/rad': 1.0,
    'nms/rad': 1.0, 'n*m*s/rad': 1.0,
    'ns/m': 1.0, 'n*s/m': 1.0,
    'm/s': 1.0, 'm/s^2': 1.0,
    'kg*m^2': 1.0, 'kgm^2': 1.0,
    '%': 1e-2,
}

_NUMBER = re.compile(r'^([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)(.*)$')
_TRUE = {'true', '1', 'yes', 'on'}
_FALSE = {'false', '0', 'no', 'off'}

_SECTIONS = (RobotParams, SimSettings, ControllerConfig)


def _field_types() -> Dict[str, Tuple[type, Any]]:
    """Map every config key to (owning dataclass, annotated type)."""
    types: Dict[str, Tuple[type, Any]] = {}
    for section in _SECTIONS:
        hints = get_type_hints(section)
        for f in dataclasses.fields(section):
            types[f.name] = (section, hints[f.name])
    return types


FIELD_TYPES = _field_types()


# ==================== Value Parsing ====================

def parse_quantity(text: str, key: str) -> List[float]:
    """
    Parse one or more numbers with an optional trailing unit.

    Args:
        text: Raw value such as '10.9 N/mm' or '130, 160 deg'
        key: Config key, used in error messages

    Returns:
        List of values converted to SI
    """
    tokens = [tok for tok in re.split(r'[,\s]+', sanitize_input(text)) if tok]
    if not tokens:
        raise ConfigValidationError(key, "value is empty")

    numbers: List[float] = []
    unit: Optional[str] = None
    for index, token in enumerate(tokens):
        match = _NUMBER.match(token)
        if match and unit is None:
            numbers.append(float(match.group(1)))
            suffix = match.group(2)
            if suffix:
                unit = suffix
        elif unit is None and index == len(tokens) - 1 and numbers:
            unit = token
        else:
            raise ConfigValidationError(key, f"cannot parse value '{text}'")

    scale = 1.0
    if unit is not None:
        scale = UNIT_SCALE.get(unit.lower())
        if scale is None:
            raise ConfigValidationError(key, f"unknown unit '{unit}'")

    return [value * scale for value in numbers]


def _parse_bool(text: str, key: str) -> bool:
    lowered = sanitize_input(text).lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ConfigValidationError(key, f"expected true/false, got '{text}'")


def _normalize(name: str) -> str:
    return re.sub(r'[\s_\-]', '', name).lower()


def _parse_enum(enum_type: type, text: str, key: str) -> Enum:
    wanted = _normalize(sanitize_input(text))
    for member in enum_type:
        if wanted in (_normalize(member.value), _normalize(member.name)):
            return member
    choices = ', '.join(member.value for member in enum_type)
    raise ConfigValidationError(key, f"must be one of: {choices}")


def parse_value(key: str, text: str) -> Any:
    """
    Convert a raw config value to the type of its field.

    Args:
        key: Config key
        text: Raw value

    Returns:
        Value in SI units with the field's Python type
    """
    if key not in FIELD_TYPES:
        raise ConfigValidationError(key, "unknown configuration key")
    if text is None:
        raise ConfigValidationError(key, "value is missing")

    _, field_type = FIELD_TYPES[key]
    if isinstance(field_type, type) and issubclass(field_type, Enum):
        return _parse_enum(field_type, text, key)
    if field_type is bool:
        return _parse_bool(text, key)
    if field_type is int:
        try:
            return int(sanitize_input(text))
        except ValueError:
            raise ConfigValidationError(key, f"expected an integer, got '{text}'")

    values = parse_quantity(text, key)
    if field_type is float:
        if len(values) != 1:
            raise ConfigValidationError(key, f"expected a single number, got {len(values)}")
        return values[0]
    return tuple(values)


# ==================== Loading ====================

def _check_syntax(path: Path) -> None:
    """Reject lines that dotenv would silently skip."""
    for line_no, raw in enumerate(path.read_text(encoding='utf-8').splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if line.startswith('export '):
            line = line[len('export '):]
        if '=' not in line:
            raise ConfigParseError(str(path), line_no, f"expected 'key = value', got '{line}'")
        key = line.split('=', 1)[0].strip()
        if not re.match(r'^[A-Za-z_][A-Za-z0-9_]*$', key):
            raise ConfigParseError(str(path), line_no, f"invalid key '{key}'")


def build_parameter_set(values: Mapping[str, Optional[str]]) -> ParameterSet:
    """
    Build a validated parameter set from raw key/value strings.

    Args:
        values: Raw values keyed by field name; 'leg_config' picks the defaults

    Returns:
        Tuple of (RobotParams, SimSettings, ControllerConfig)
    """
    values = {key.strip().lower(): value for key, value in values.items()}
    leg_config = LegConfig.B
    if 'leg_config' in values:
        leg_config = parse_value('leg_config', values.pop('leg_config'))

    overrides: Dict[type, Dict[str, Any]] = {section: {} for section in _SECTIONS}
    for key, text in values.items():
        parsed = parse_value(key, text)
        section, _ = FIELD_TYPES[key]
        overrides[section][key] = parsed

    params = dataclasses.replace(default_params(leg_config), **overrides[RobotParams])
    settings = SimSettings(**overrides[SimSettings])
    controller = ControllerConfig(**overrides[ControllerConfig])
    return validate_parameter_set(params, settings, controller)


def validate_parameter_set(params: RobotParams, settings: SimSettings,
                           controller: ControllerConfig) -> ParameterSet:
    """Raise ConfigValidationError for the first violated invariant."""
    for is_valid, error in (validate_robot_params(params),
                            validate_sim_settings(settings),
                            validate_controller_config(controller)):
        if not is_valid:
            raise ConfigValidationError.from_validator(error)
    return params, settings, controller


def load_config(path: Union[str, Path]) -> ParameterSet:
    """
    Load and validate a parameter file.

    Args:
        path: Path to a key = value parameter file

    Returns:
        Tuple of (RobotParams, SimSettings, ControllerConfig)
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigFileNotFoundError(str(path))

    try:
        _check_syntax(path)
        values = dotenv_values(path, interpolate=False)
    except UnicodeDecodeError as e:
        raise ConfigParseError(str(path), 0, f"file is not UTF-8 text ({e})")

    parameter_set = build_parameter_set(values)
    logger.info(f"Loaded configuration {parameter_set[0].leg_config.value} from {path}")
    return parameter_set


def apply_overrides(parameter_set: ParameterSet, overrides: Iterable[str]) -> ParameterSet:
    """
    Apply command-line 'key=value' overrides to a parameter set.

    Args:
        parameter_set: Parameter set to start from
        overrides: Strings of the form 'key=value'

    Returns:
        New validated parameter set
    """
    values: Dict[str, str] = {}
    for item in overrides:
        if '=' not in item:
            raise ConfigError(f"override must look like key=value, got '{item}'")
        key, value = item.split('=', 1)
        values[key.strip().lower()] = value

    if 'leg_config' in values:
        # A topology switch restarts from that topology's defaults.
        base = parse_serialized(serialize_config(*parameter_set))
        for key in ('segment_lengths', 'resting_joint_angles', 'total_mass'):
            base.pop(key, None)
        base.update(values)
        return build_parameter_set(base)

    params, settings, controller = parameter_set
    grouped: Dict[type, Dict[str, Any]] = {section: {} for section in _SECTIONS}
    for key, text in values.items():
        parsed = parse_value(key, text)
        grouped[FIELD_TYPES[key][0]][key] = parsed

    return validate_parameter_set(
        dataclasses.replace(params, **grouped[RobotParams]),
        dataclasses.replace(settings, **grouped[SimSettings]),
        dataclasses.replace(controller, **grouped[ControllerConfig]),
    )


# ==================== Serialization ====================

def _format_value(value: Any) -> str:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ', '.join(repr(float(item)) for item in value)
    return str(value)


def serialize_config(params: RobotParams, settings: SimSettings, controller: ControllerConfig) -> str:
    """
    Write a parameter set as a parameter file in SI units.

    Args:
        params: Robot parameters
        settings: Simulation settings
        controller: Controller configuration

    Returns:
        File contents; loading them yields an identical parameter set
    """
    lines = ["# SELDA Sim parameter set (SI units)"]
    for title, section in (("robot", params), ("simulation", settings), ("controller", controller)):
        lines.append(f"# {title}")
        for f in dataclasses.fields(section):
            lines.append(f"{f.name} = {_format_value(getattr(section, f.name))}")
    return '\n'.join(lines) + '\n'


def parse_serialized(text: str) -> Dict[str, str]:
    """Split serialized parameter text into raw key/value strings."""
    values: Dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        key, value = line.split('=', 1)
        values[key.strip()] = value.strip()
    return values


def config_hash(params: RobotParams, settings: SimSettings, controller: ControllerConfig) -> str:
    """SHA-256 of the serialized parameter set."""
    return hashlib.sha256(serialize_config(params, settings, controller).encode('utf-8')).hexdigest()


def load_parameter_set(path: Optional[Union[str, Path]] = None,
                       overrides: Iterable[str] = ()) -> ParameterSet:
    """
    Parameter set for a command: the file when given, else the configuration B defaults.

    Args:
        path: Optional parameter file
        overrides: 'key=value' strings applied on top

    Returns:
        Validated (RobotParams, SimSettings, ControllerConfig)
    """
    if path is not None:
        parameter_set = load_config(path)
    else:
        parameter_set = validate_parameter_set(default_params(LegConfig.B), SimSettings(), ControllerConfig())
    overrides = list(overrides)
    if overrides:
        parameter_set = apply_overrides(parameter_set, overrides)
        logger.info(f"Applied {len(overrides)} override(s)")
    return parameter_set
