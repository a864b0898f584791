"""
SELDA Sim - Leg Kinematics
Planar forward kinematics of the serial leg, biarticular geometry and boom mapping.

Angle conventions:
    * the first joint angle is the absolute angle of the femur, measured from
      the downward vertical, positive when the leg points behind the hip
      (towards -x, opposite to the direction of travel);
    * the remaining angles are interior angles between consecutive segments,
      pi meaning straight. Every interior joint flexes to the same side, so a
      loaded leg folds into a C and knee and ankle compress together;
    * the neutral hip angle is the femur angle that puts the resting tip
      straight under the hip. Hip references are offsets from it.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple
import math

import numpy as np

from src.model.params import RobotParams


@dataclass(frozen=True)
class JointState:
    """Hip absolute angle followed by interior joint angles, and their rates."""

    joint_angles: np.ndarray
    joint_velocities: np.ndarray

    def __post_init__(self):
        angles = np.asarray(self.joint_angles, dtype=float)
        velocities = np.asarray(self.joint_velocities, dtype=float)
        if angles.shape != velocities.shape:
            raise ValueError(
                f"joint_angles and joint_velocities differ in length ({angles.size} vs {velocities.size})")
        object.__setattr__(self, 'joint_angles', angles)
        object.__setattr__(self, 'joint_velocities', velocities)

    @classmethod
    def at_rest(cls, angles: Sequence[float]) -> 'JointState':
        return cls(np.asarray(angles, dtype=float), np.zeros(len(angles)))

    @property
    def interior_angles(self) -> np.ndarray:
        return self.joint_angles[1:]

    def is_valid(self) -> bool:
        """Interior angles lie in (0, pi]."""
        interior = self.interior_angles
        return bool(np.all(interior > 0.0) and np.all(interior <= math.pi))


@dataclass(frozen=True)
class BoomState:
    """Boom rotation angles and rates."""

    theta_h: float
    theta_v: float
    theta_h_rate: float = 0.0
    theta_v_rate: float = 0.0


@dataclass(frozen=True)
class PlanarState:
    """Unrolled planar trunk coordinates."""

    x: float
    y: float
    vx: float = 0.0
    vy: float = 0.0


@dataclass(frozen=True)
class LegPose:
    """Joint positions in the hip frame (hip first, tip last)."""

    joints: np.ndarray
    virtual_leg_length: float
    virtual_leg_angle: float

    @property
    def tip(self) -> np.ndarray:
        return self.joints[-1]


def joint_signs(n_interior: int) -> np.ndarray:
    """Bending direction of each interior joint; all joints flex to the same side."""
    return -np.ones(n_interior)


def angle_map(n_segments: int) -> np.ndarray:
    """
    Jacobian of absolute segment angles with respect to the joint angles.

    Segment j has absolute angle phi_j = theta + sum_{k<=j} s_k (pi - a_k),
    so d phi_j / d theta = 1 and d phi_j / d a_k = -s_k for k <= j.
    """
    signs = joint_signs(n_segments - 1)
    jac = np.zeros((n_segments, n_segments))
    jac[:, 0] = 1.0
    for k in range(1, n_segments):
        jac[k:, k] = -signs[k - 1]
    return jac


def absolute_angles(joint_angles: np.ndarray) -> np.ndarray:
    """Absolute segment angles from the downward vertical."""
    joint_angles = np.asarray(joint_angles, dtype=float)
    signs = joint_signs(joint_angles.size - 1)
    bends = signs * (math.pi - joint_angles[1:])
    return joint_angles[0] + np.concatenate(([0.0], np.cumsum(bends)))


def segment_directions(phi: np.ndarray) -> np.ndarray:
    """Unit vectors along each segment, pointing from proximal to distal end."""
    return np.column_stack((-np.sin(phi), -np.cos(phi)))


def _check_dimensions(q: JointState, params: RobotParams):
    if q.joint_angles.size != params.n_segments:
        raise ValueError(
            f"joint state has {q.joint_angles.size} angles, leg has {params.n_segments} segments")


def forward_kinematics(q: JointState, params: RobotParams) -> LegPose:
    """
    Positions of every joint and of the distal tip in the hip frame.

    Args:
        q: Joint state matching the leg's segment count
        params: Robot parameters

    Returns:
        LegPose with joint positions, virtual leg length and angle
    """
    _check_dimensions(q, params)
    lengths = np.asarray(params.segment_lengths)
    offsets = segment_directions(absolute_angles(q.joint_angles)) * lengths[:, None]
    joints = np.vstack((np.zeros(2), np.cumsum(offsets, axis=0)))
    length, angle = _virtual_leg(joints[-1])
    return LegPose(joints=joints, virtual_leg_length=length, virtual_leg_angle=angle)


def _virtual_leg(tip: np.ndarray) -> Tuple[float, float]:
    length = float(np.hypot(tip[0], tip[1]))
    # positive behind the hip
    angle = float(math.atan2(-tip[0], -tip[1]))
    return length, angle


def virtual_leg(q: JointState, params: RobotParams) -> Tuple[float, float]:
    """Length [m] and angle from vertical [rad] of the hip-to-tip line."""
    return _virtual_leg(forward_kinematics(q, params).tip)


def resting_joint_state(params: RobotParams, hip_angle: float = 0.0) -> JointState:
    """Resting pose with the femur at hip_angle, all rates zero."""
    return JointState.at_rest((hip_angle,) + tuple(params.resting_joint_angles))


def neutral_hip_angle(params: RobotParams) -> float:
    """
    Femur angle at which the resting leg stands upright.

    The virtual leg angle grows one-for-one with the femur angle, so the
    neutral angle cancels the virtual leg angle of the pose with a vertical femur.
    """
    _, angle = virtual_leg(resting_joint_state(params), params)
    return -angle


def tip_jacobian(joint_angles: np.ndarray, params: RobotParams) -> np.ndarray:
    """Analytic 2 x n Jacobian of the tip position with respect to the joint angles."""
    joint_angles = np.asarray(joint_angles, dtype=float)
    phi = absolute_angles(joint_angles)
    lengths = np.asarray(params.segment_lengths)
    # d u(phi) / d phi = (-cos phi, sin phi)
    d_tip_d_phi = np.vstack((-np.cos(phi), np.sin(phi))) * lengths
    return d_tip_d_phi @ angle_map(joint_angles.size)


def tip_velocity(q: JointState, params: RobotParams) -> np.ndarray:
    """Tip velocity in the hip frame [m/s]."""
    _check_dimensions(q, params)
    return tip_jacobian(q.joint_angles, params) @ q.joint_velocities


def biarticular_deflection(q: JointState, params: RobotParams) -> float:
    """
    Stretch of the biarticular spring spanning knee and ankle.

    Args:
        q: Joint state with knee and ankle angles
        params: Robot parameters

    Returns:
        Deflection [m]; negative when both joints open past rest
    """
    return biarticular_stretch(q.joint_angles[1], q.joint_angles[2], params)


def biarticular_stretch(knee: float, ankle: float, params: RobotParams) -> float:
    """Scalar form of biarticular_deflection."""
    return params.biarticular_insertion_radius * (
        (params.knee_resting_angle - knee) + (params.ankle_resting_angle - ankle))


def boom_to_plane(boom: BoomState, boom_radius: float) -> PlanarState:
    """
    Unroll the boom angles into planar trunk coordinates.

    Args:
        boom: Boom angles and rates
        boom_radius: Boom length L [m]

    Returns:
        PlanarState with x = L * theta_h (arc length) and y = L * sin(theta_v)
    """
    if boom_radius <= 0:
        raise ValueError(f"boom_radius must be positive, got {boom_radius}")
    return PlanarState(
        x=boom_radius * boom.theta_h,
        y=boom_radius * math.sin(boom.theta_v),
        vx=boom_radius * boom.theta_h_rate,
        vy=boom_radius * math.cos(boom.theta_v) * boom.theta_v_rate,
    )


def plane_to_boom(planar: PlanarState, boom_radius: float) -> BoomState:
    """Inverse of boom_to_plane for |y| < L."""
    if boom_radius <= 0:
        raise ValueError(f"boom_radius must be positive, got {boom_radius}")
    if abs(planar.y) >= boom_radius:
        raise ValueError(f"height {planar.y} m is out of reach of a {boom_radius} m boom")
    theta_v = math.asin(planar.y / boom_radius)
    return BoomState(
        theta_h=planar.x / boom_radius,
        theta_v=theta_v,
        theta_h_rate=planar.vx / boom_radius,
        theta_v_rate=planar.vy / (boom_radius * math.cos(theta_v)),
    )
