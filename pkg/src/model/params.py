"""
SELDA Sim - Parameter Sets
Robot design parameters, simulation settings and controller settings.
All values are stored in SI units (m, kg, s, N, rad).
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Tuple
import math


class LegConfig(str, Enum):
    """Leg topologies."""
    A = "A"  # three segments, no foot
    B = "B"  # three segments plus SELDA-actuated foot


class Integrator(str, Enum):
    """Fixed-step integrators."""
    SEMI_IMPLICIT_EULER = "semi_implicit_euler"
    RK4 = "rk4"


class FrictionModel(str, Enum):
    """Tangential contact laws."""
    REGULARIZED = "regularized"  # mu * Fn * tanh(v / v_reg)
    ANCHORED = "anchored"        # stick spring to an anchor, capped by mu * Fn


class SeldaModel(str, Enum):
    """Pneumatic transmission laws."""
    LINEAR = "linear"
    ISOTHERMAL = "isothermal"


class TimingReference(str, Enum):
    """Origin of the ankle activation phase."""
    CLOCK = "clock"
    TOUCHDOWN = "touchdown"


SEGMENT_LENGTH = 0.150
FOOT_LENGTH = 0.070
MASS_A = 1.05
MASS_B = 1.20
ATMOSPHERIC_PRESSURE = 101325.0


@dataclass(frozen=True)
class RobotParams:
    """Physical parameters of the leg, trunk and transmissions."""

    leg_config: LegConfig
    total_mass: float                               # kg
    segment_lengths: Tuple[float, ...]              # m, hip to tip
    resting_joint_angles: Tuple[float, ...]         # rad, knee, ankle[, foot end-stop]
    trunk_mass_fraction: float = 0.8
    knee_stiffness: float = 10900.0                 # N/m
    knee_cam_radius: float = 0.030                  # m
    biarticular_stiffness: float = 9800.0           # N/m
    biarticular_insertion_radius: float = 0.030     # m
    selda_stiffness: float = 0.15                   # N*m/rad
    selda_bias_torque: float = 0.3                  # N*m
    selda_pulley_radius: float = 0.030              # m
    selda_coupling_ratio: float = 1.0               # motor rad per foot rad
    selda_model: SeldaModel = SeldaModel.LINEAR
    selda_precharge_pressure: float = 0.5e5         # Pa, gauge
    motor_torque_limit: float = 1.3                 # N*m, per motor
    motor_rotor_inertia: float = 5.0e-5             # kg*m^2
    motor_damping: float = 1.0e-4                   # N*m*s/rad
    motor_lag: float = 0.005                        # s, 0 disables the filter
    motor_stroke: float = 0.5 * math.pi             # rad
    hip_gear_ratio: float = 5.0
    boom_radius: float = 1.55                       # m
    leg_resting_length: float = 0.408               # m, calibration target
    joint_damping: float = 0.002                    # N*m*s/rad, passive joints
    joint_armature: float = 1.0e-6                  # kg*m^2, passive joints
    joint_min_angle: float = math.radians(20.0)     # rad
    endstop_stiffness: float = 50.0                 # N*m/rad
    endstop_damping: float = 0.005                  # N*m*s/rad

    @property
    def n_segments(self) -> int:
        return len(self.segment_lengths)

    @property
    def has_foot(self) -> bool:
        """True for the four-segment leg with the SELDA foot joint."""
        return self.n_segments == 4

    @property
    def trunk_mass(self) -> float:
        return self.total_mass * self.trunk_mass_fraction

    @property
    def segment_masses(self) -> Tuple[float, ...]:
        """Leg mass split across segments proportionally to length."""
        leg_mass = self.total_mass - self.trunk_mass
        total_length = sum(self.segment_lengths)
        return tuple(leg_mass * length / total_length for length in self.segment_lengths)

    @property
    def hip_torque_limit(self) -> float:
        """Gear-reflected hip motor limit."""
        return self.hip_gear_ratio * self.motor_torque_limit

    @property
    def hip_reflected_inertia(self) -> float:
        return self.hip_gear_ratio ** 2 * self.motor_rotor_inertia

    @property
    def knee_resting_angle(self) -> float:
        return self.resting_joint_angles[0]

    @property
    def ankle_resting_angle(self) -> float:
        return self.resting_joint_angles[1]

    @property
    def foot_endstop_angle(self) -> float:
        """Fully extended foot angle; the pre-pressurized line holds the foot here."""
        if not self.has_foot:
            raise AttributeError("leg configuration A has no foot joint")
        return self.resting_joint_angles[2]


@dataclass(frozen=True)
class SimSettings:
    """Integration, contact and trial settings."""

    physics_dt: float = 1.0e-4                      # s
    control_dt: float = 1.0e-3                      # s
    integrator: Integrator = Integrator.SEMI_IMPLICIT_EULER
    contact_stiffness: float = 1.0e5                # N/m
    contact_damping: float = 100.0                  # N*s/m
    friction_coefficient: float = 0.8
    friction_velocity: float = 0.1                  # m/s
    friction_model: FrictionModel = FrictionModel.REGULARIZED
    tangential_stiffness: float = 2.0e4             # N/m, anchored model
    tangential_damping: float = 20.0                # N*s/m, anchored model
    total_duration: float = 20.0                    # s
    seed: int = 0                                   # reserved
    gravity: float = 9.81                           # m/s^2
    contact_enabled: bool = True
    initial_clearance: float = 0.005                # m, tip height at t = 0

    @property
    def substeps(self) -> int:
        """Physics steps per control tick."""
        return int(round(self.control_dt / self.physics_dt))


@dataclass(frozen=True)
class ControllerConfig:
    """Open-loop hip drive and ankle step-torque timing."""

    hip_amplitude: float = math.radians(18.0)       # rad
    frequency: float = 1.65                         # Hz
    kp: float = 40.0                                # N*m/rad
    kd: float = 0.35                                # N*m*s/rad
    ankle_step_torque: float = 1.0                  # N*m
    activation_start: float = 0.20                  # cycle fraction
    activation_end: float = 0.5                     # cycle fraction
    ankle_enabled: bool = False
    ankle_timing_reference: TimingReference = TimingReference.CLOCK

    @property
    def period(self) -> float:
        return 1.0 / self.frequency


def default_params(config: LegConfig = LegConfig.B) -> RobotParams:
    """
    Design parameters of either leg configuration.

    Args:
        config: LegConfig.A (three segments) or LegConfig.B (adds the 70 mm foot)

    Returns:
        RobotParams with the documented defaults
    """
    config = LegConfig(config)
    knee = math.radians(130.0)
    ankle = math.radians(160.0)

    if config == LegConfig.A:
        return RobotParams(
            leg_config=config,
            total_mass=MASS_A,
            segment_lengths=(SEGMENT_LENGTH,) * 3,
            resting_joint_angles=(knee, ankle),
        )

    return RobotParams(
        leg_config=config,
        total_mass=MASS_B,
        segment_lengths=(SEGMENT_LENGTH,) * 3 + (FOOT_LENGTH,),
        resting_joint_angles=(knee, ankle, math.radians(175.0)),
    )


def degenerate_config_b(params_a: RobotParams, foot_length: float = 1.0e-9) -> RobotParams:
    """
    Configuration B whose foot adds neither length nor mass.

    Used as an equivalence oracle: its gait must match configuration A.
    """
    params_b = default_params(LegConfig.B)
    return replace(
        params_a,
        leg_config=LegConfig.B,
        segment_lengths=tuple(params_a.segment_lengths) + (foot_length,),
        resting_joint_angles=tuple(params_a.resting_joint_angles) + (params_b.foot_endstop_angle,),
        total_mass=params_a.total_mass,
    )
