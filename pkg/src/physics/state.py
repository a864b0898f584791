"""
SELDA Sim - Simulation State
Plain value types passed between the integrator, the controller and the log.
"""

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from src.physics.elastics import SeldaState
from src.physics.kinematics import JointState


@dataclass(frozen=True)
class ActuatorCommand:
    """Controller output held over one control period."""

    hip_torque: float = 0.0         # N*m, at the hip joint
    ankle_torque: float = 0.0       # N*m, SELDA motor reference


@dataclass(frozen=True)
class AppliedTorques:
    """Actuator torques acting on the plant after saturation and motor lag."""

    hip: float = 0.0
    motor: float = 0.0


@dataclass(frozen=True)
class ContactPoint:
    """Distal tip of the leg in world coordinates; the ground is y = 0."""

    position: np.ndarray            # m
    velocity: np.ndarray            # m/s
    penetration: float              # m, zero above ground
    anchor_x: Optional[float] = None

    @property
    def penetration_rate(self) -> float:
        return -float(self.velocity[1])

    @property
    def in_contact(self) -> bool:
        return self.penetration > 0.0


@dataclass(frozen=True)
class SimState:
    """
    Full state of trunk, leg and SELDA motor.

    The trunk pitch is fixed by the boom, so the trunk contributes only its
    position (x, y). Contact flag and ground reaction are evaluated at this
    state and kept for logging.
    """

    t: float
    x: float
    y: float
    vx: float
    vy: float
    joints: JointState
    selda: Optional[SeldaState] = None
    contact: bool = False
    grf: Tuple[float, float] = (0.0, 0.0)
    anchor_x: Optional[float] = None
    hip_torque: float = 0.0

    def positions(self) -> np.ndarray:
        """Generalized positions [x, y, hip, interior angles..., motor]."""
        values = [np.array([self.x, self.y]), self.joints.joint_angles]
        if self.selda is not None:
            values.append(np.array([self.selda.motor_angle]))
        return np.concatenate(values)

    def velocities(self) -> np.ndarray:
        values = [np.array([self.vx, self.vy]), self.joints.joint_velocities]
        if self.selda is not None:
            values.append(np.array([self.selda.motor_velocity]))
        return np.concatenate(values)

    def evolve(self, **changes) -> 'SimState':
        return replace(self, **changes)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.positions())) and np.all(np.isfinite(self.velocities())))
