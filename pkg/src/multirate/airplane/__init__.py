from .build import (
    HOLD_COURSE,
    PILOT_RULES,
    SCENARIOS,
    TURN_GRADUAL,
    TURN_IMMEDIATE,
    TURN_REVERSAL,
    airplane_initial_state,
    airplane_props,
    build_airplane,
    output_records,
    reach,
    safe_yaw_all,
    stable_all,
)
from .control import V1, V2, goal_roll_angle, horiz_wing_angle, move_angle, tail_wing_angle
from .dynamics import AirplaneParams, DynamicsError, d_beta, d_phi, d_psi, lift, norm_angle
from .machines import (
    MainState,
    PilotState,
    SubState,
    main_delta,
    pilot_delta,
    sub_delta,
)

__all__ = [
    "AirplaneParams",
    "DynamicsError",
    "HOLD_COURSE",
    "MainState",
    "PILOT_RULES",
    "PilotState",
    "SCENARIOS",
    "SubState",
    "TURN_GRADUAL",
    "TURN_IMMEDIATE",
    "TURN_REVERSAL",
    "V1",
    "V2",
    "airplane_initial_state",
    "airplane_props",
    "build_airplane",
    "d_beta",
    "d_phi",
    "d_psi",
    "goal_roll_angle",
    "horiz_wing_angle",
    "lift",
    "main_delta",
    "move_angle",
    "norm_angle",
    "output_records",
    "pilot_delta",
    "reach",
    "safe_yaw_all",
    "stable_all",
    "sub_delta",
    "tail_wing_angle",
]
