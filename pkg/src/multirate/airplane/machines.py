"""The three machine behaviors of the turning control system.

All three are pure: (state, consumed inputs) -> (state, emitted outputs).
The wing and rudder subcontrollers slew their surface toward the last
commanded goal angle; the main controller integrates the turn dynamics
from the actual surface angles reported back by the subcontrollers and
issues new surface commands; the pilot console plays a scenario of heading
increments, offset by whatever the outer environment injects.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..model import BOT, Bot, ExecutionError, Status, Value
from .control import goal_roll_angle, horiz_wing_angle, move_angle, tail_wing_angle
from .dynamics import AirplaneParams, d_beta, d_phi, d_psi, norm_angle


@dataclass(frozen=True)
class SubState:
    curr_angle: float
    goal_angle: float
    diff_angle: float  # max change per fast step


@dataclass(frozen=True)
class MainState:
    velocity: float
    curr_yaw: float
    curr_roll: float
    curr_dir: float
    goal_dir: float
    law_version: str


@dataclass(frozen=True)
class PilotState:
    scenario: tuple[Value, ...]  # heading increments (or BOT for an idle slot)


def _angle(v: Value, what: str) -> float:
    if isinstance(v, float):
        return v
    if isinstance(v, Bot):
        # nothing arrived this round: the surface is still at rest
        return 0.0
    raise ExecutionError(f"{what} must be a number or bot, got {v!r}")


def sub_delta(s: SubState, command: Value) -> tuple[SubState, Value]:
    """One fast step of a surface controller.

    The surface moves toward the previous goal first, then a numeric
    command becomes the new goal (bot keeps the old one); the new surface
    angle is emitted.
    """
    new_curr = norm_angle(move_angle(s.curr_angle, s.goal_angle, s.diff_angle))
    if isinstance(command, float):
        new_goal = norm_angle(command)
    elif isinstance(command, Bot):
        new_goal = s.goal_angle
    else:
        raise ExecutionError(f"surface command must be a number or bot, got {command!r}")
    return SubState(new_curr, new_goal, s.diff_angle), new_curr


def main_delta(
    m: MainState,
    pilot_in: Value,
    left_in: Value,
    right_in: Value,
    rudder_in: Value,
    period: int,
    params: AirplaneParams,
) -> tuple[MainState, tuple[Status, float, float, float]]:
    """One step of the main controller.

    Integrates the position sensors from the actual surface angles: the
    roll and yaw laws are angular accelerations, so their contribution over
    one period scales with the squared period, while the banking turn rate
    is a plain rate scaled by the period. A numeric pilot input increments
    the goal direction. Emits the new status record plus the three surface
    commands (the left aileron is the exact negation of the right one).
    """
    la = _angle(left_in, "left wing input")
    ra = _angle(right_in, "right wing input")
    ta = _angle(rudder_in, "rudder input")
    t = float(period)

    yaw = norm_angle(m.curr_yaw + d_beta(la, ra, ta, params) * t * t)
    roll = norm_angle(m.curr_roll + d_phi(la, ra, params) * t * t)
    direction = norm_angle(m.curr_dir + d_psi(m.curr_roll, m.velocity, params) * t)
    if isinstance(pilot_in, float):
        goal = norm_angle(m.goal_dir + pilot_in)
    elif isinstance(pilot_in, Bot):
        goal = m.goal_dir
    else:
        raise ExecutionError(f"pilot input must be a number or bot, got {pilot_in!r}")

    version = m.law_version
    ra_cmd = norm_angle(
        horiz_wing_angle(version, roll, goal_roll_angle(version, roll, direction, goal))
    )
    ta_cmd = norm_angle(tail_wing_angle(version, yaw))

    state = MainState(m.velocity, yaw, roll, direction, goal, version)
    status = Status(direction, roll, yaw, goal)
    return state, (status, -ra_cmd, ra_cmd, ta_cmd)


def pilot_delta(s: PilotState, outer_in: Value) -> tuple[PilotState, Value]:
    """One step of the pilot console.

    With a pending scenario entry, emits that increment plus the outer
    environment input (bot entries are idle slots that forward the outer
    input alone). With an exhausted scenario the console emits bot and
    ignores the outer input.
    """
    if not s.scenario:
        return s, BOT
    head, rest = s.scenario[0], PilotState(s.scenario[1:])
    outer = outer_in if isinstance(outer_in, float) else None
    if isinstance(head, float):
        return rest, norm_angle(head + (outer or 0.0))
    if outer is not None:
        return rest, norm_angle(outer)
    return rest, BOT


# Engine-facing wrappers; port names fixed by the airplane wiring.


def sub_behavior(state, inputs, period):
    new_state, out = sub_delta(state, inputs["input"])
    return new_state, {"output": out}


def pilot_behavior(state, inputs, period):
    new_state, out = pilot_delta(state, inputs["input"])
    return new_state, {"output": out}


def make_main_behavior(params: AirplaneParams):
    def main_behavior(state, inputs, period):
        new_state, (status, left_cmd, right_cmd, rudder_cmd) = main_delta(
            state,
            inputs["input"],
            inputs["inLW"],
            inputs["inRW"],
            inputs["inTW"],
            period,
            params,
        )
        return new_state, {
            "output": status,
            "outLW": left_cmd,
            "outRW": right_cmd,
            "outTW": rudder_cmd,
        }

    return main_behavior
