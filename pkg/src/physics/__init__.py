"""Physics package for SELDA Sim"""

from .kinematics import (
    BoomState,
    JointState,
    LegPose,
    PlanarState,
    biarticular_deflection,
    boom_to_plane,
    forward_kinematics,
    neutral_hip_angle,
    plane_to_boom,
    resting_joint_state,
    tip_jacobian,
    tip_velocity,
    virtual_leg,
)
from .elastics import (
    SeldaState,
    StiffnessCharacterization,
    biarticular_torques,
    characterize_stiffness,
    elastic_energy,
    endstop_torque,
    isothermal_selda_torque,
    knee_torque,
    selda_torque,
)
from .state import ActuatorCommand, AppliedTorques, ContactPoint, SimState
from .dynamics import (
    EnergyFlows,
    EnergyLedger,
    LegModel,
    advance,
    compute_accelerations,
    contact_force,
    energy_flows,
    get_leg_model,
    linear_momentum,
    resting_state,
    step,
    total_energy,
    update_anchor,
)

__all__ = [
    'BoomState', 'JointState', 'LegPose', 'PlanarState',
    'biarticular_deflection', 'boom_to_plane', 'forward_kinematics', 'neutral_hip_angle', 'plane_to_boom',
    'resting_joint_state',
    'tip_jacobian', 'tip_velocity', 'virtual_leg',
    'SeldaState', 'StiffnessCharacterization', 'biarticular_torques', 'characterize_stiffness',
    'elastic_energy', 'endstop_torque', 'isothermal_selda_torque', 'knee_torque', 'selda_torque',
    'ActuatorCommand', 'AppliedTorques', 'ContactPoint', 'SimState',
    'EnergyFlows', 'EnergyLedger', 'LegModel', 'advance', 'compute_accelerations', 'contact_force', 'energy_flows',
    'get_leg_model', 'linear_momentum', 'resting_state', 'step', 'total_energy', 'update_anchor',
]
