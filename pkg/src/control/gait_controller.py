"""
SELDA Sim - Gait Controller
Open-loop sinusoidal hip drive with PD tracking and the timed ankle step torque.

Cycle phase 0 is the upward zero crossing of the hip reference, when the
leg swings rearward through its neutral angle. The reference is an offset
from that neutral angle.
"""

from typing import Optional
import logging
import math

from src.model.params import ControllerConfig, RobotParams, TimingReference
from src.physics.kinematics import neutral_hip_angle
from src.physics.state import ActuatorCommand, SimState

logger = logging.getLogger(__name__)

# Gear-reflected hip limit of the default design, 5 x 1.3 N*m
HIP_TORQUE_LIMIT = 6.5

# Contact gaps shorter than this do not start a new cycle in touchdown mode
TOUCHDOWN_DEBOUNCE = 0.05


def hip_reference(t: float, cfg: ControllerConfig) -> float:
    """Hip angle reference A * sin(2 pi f t) [rad]."""
    return cfg.hip_amplitude * math.sin(2.0 * math.pi * cfg.frequency * t)


def hip_reference_rate(t: float, cfg: ControllerConfig) -> float:
    """Analytic time derivative of hip_reference [rad/s]."""
    omega = 2.0 * math.pi * cfg.frequency
    return cfg.hip_amplitude * omega * math.cos(omega * t)


def hip_pd_torque(theta_ref: float, theta: float, theta_ref_rate: float, theta_rate: float,
                  cfg: ControllerConfig, limit: float = HIP_TORQUE_LIMIT) -> float:
    """
    PD tracking torque at the hip, saturated at the motor limit.

    Args:
        theta_ref: Reference angle [rad]
        theta: Measured angle [rad]
        theta_ref_rate: Reference rate [rad/s]
        theta_rate: Measured rate [rad/s]
        cfg: Controller configuration with kp, kd
        limit: Saturation bound [N*m]

    Returns:
        Torque [N*m] within [-limit, limit]
    """
    torque = cfg.kp * (theta_ref - theta) + cfg.kd * (theta_ref_rate - theta_rate)
    return max(-limit, min(limit, torque))


def cycle_phase(t: float, cfg: ControllerConfig, phase_origin: float = 0.0) -> float:
    """Fraction of the step cycle elapsed since the phase origin, in [0, 1)."""
    return ((t - phase_origin) * cfg.frequency) % 1.0


def ankle_command(t: float, cfg: ControllerConfig, phase_origin: float = 0.0) -> float:
    """
    Ankle motor torque reference.

    Args:
        t: Time [s]
        cfg: Controller configuration
        phase_origin: Time at which cycle phase 0 starts [s]

    Returns:
        The step torque while activation_start <= phase < activation_end, else 0
    """
    if not cfg.ankle_enabled:
        return 0.0
    phase = cycle_phase(t, cfg, phase_origin)
    if cfg.activation_start <= phase < cfg.activation_end:
        return cfg.ankle_step_torque
    return 0.0


class GaitController:
    """Samples both control laws once per control tick."""

    def __init__(self, cfg: ControllerConfig, params: RobotParams):
        """
        Initialize gait controller.

        Args:
            cfg: Controller configuration
            params: Robot parameters, for the hip limit and the foot
        """
        self.cfg = cfg
        self.params = params
        self.neutral_angle = neutral_hip_angle(params)
        self.phase = 0.0
        self._touchdown_time: Optional[float] = None
        self._liftoff_time: Optional[float] = None
        self._in_contact = False

    def reset(self):
        self.phase = 0.0
        self._touchdown_time = None
        self._liftoff_time = None
        self._in_contact = False

    @property
    def phase_origin(self) -> float:
        """Start of the current cycle; the clock origin until the first touchdown."""
        if self.cfg.ankle_timing_reference == TimingReference.TOUCHDOWN and self._touchdown_time is not None:
            return self._touchdown_time
        return 0.0

    def _track_contact(self, state: SimState):
        if state.contact and not self._in_contact:
            gap = None if self._liftoff_time is None else state.t - self._liftoff_time
            if gap is None or gap >= TOUCHDOWN_DEBOUNCE:
                self._touchdown_time = state.t
                logger.debug(f"Touchdown at t={state.t:.4f} s")
        elif self._in_contact and not state.contact:
            self._liftoff_time = state.t
        self._in_contact = state.contact

    def update(self, state: SimState) -> ActuatorCommand:
        """
        Compute the command held until the next control tick.

        Args:
            state: State sampled at the tick

        Returns:
            ActuatorCommand with hip torque and ankle motor reference
        """
        self._track_contact(state)
        t = state.t

        theta = float(state.joints.joint_angles[0]) - self.neutral_angle
        theta_rate = float(state.joints.joint_velocities[0])
        hip = hip_pd_torque(hip_reference(t, self.cfg), theta, hip_reference_rate(t, self.cfg), theta_rate,
                            self.cfg, self.params.hip_torque_limit)

        origin = self.phase_origin
        self.phase = cycle_phase(t, self.cfg, origin)
        ankle = ankle_command(t, self.cfg, origin) if self.params.has_foot else 0.0
        return ActuatorCommand(hip_torque=hip, ankle_torque=ankle)
