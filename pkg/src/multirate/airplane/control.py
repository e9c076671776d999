"""Control laws mapping position errors to surface commands.

Two versions are provided. The original laws (v1) are purely proportional
with saturation caps. The redesigned laws (v2) square the response below a
one-degree error so the surfaces settle gently, and slew-limit the goal
roll angle to 1.5 degrees per controller period so the roll can never
change abruptly.
"""

from __future__ import annotations

from .dynamics import norm_angle

V1 = "v1"
V2 = "v2"
LAW_VERSIONS = (V1, V2)


def _sign(x: float) -> float:
    return 1.0 if x > 0 else (-1.0 if x < 0 else 0.0)


def _check_version(version: str):
    if version not in LAW_VERSIONS:
        raise ValueError(f"unknown law version {version!r}")


def move_angle(cur: float, goal: float, max_diff: float) -> float:
    """Step `cur` toward `goal`, moving at most `max_diff` degrees."""
    if abs(goal - cur) > max_diff:
        return cur + max_diff * _sign(goal - cur)
    return goal


def goal_roll_angle(version: str, curr_roll: float, curr_dir: float, goal_dir: float) -> float:
    """Desired roll for the remaining heading error.

    v1: proportional (gain 0.3), capped at 20 degrees. v2: proportional
    (gain 0.32) but moving at most 1.5 degrees from the current roll.
    """
    _check_version(version)
    fd = norm_angle(goal_dir - curr_dir)
    if version == V1:
        return _sign(fd) * min(abs(fd) * 0.3, 20.0)
    target = fd * 0.32
    if abs(target - curr_roll) > 1.5:
        return curr_roll + _sign(target - curr_roll) * 1.5
    return target


def horiz_wing_angle(version: str, curr_roll: float, goal_roll: float) -> float:
    """Right-aileron command for the remaining roll error (left is mirrored).

    Proportional with gain 0.3, capped at 45 degrees; v2 responds with the
    squared error once the error is within one degree.
    """
    _check_version(version)
    fr = norm_angle(goal_roll - curr_roll)
    if version == V1 or abs(fr) > 1.0:
        return _sign(fr) * min(abs(fr) * 0.3, 45.0)
    return _sign(fr) * fr * fr * 0.3


def tail_wing_angle(version: str, curr_yaw: float) -> float:
    """Rudder command countering the current yaw (goal yaw is zero).

    Proportional with gain 0.8, capped at 30 degrees; v2 responds with the
    squared error once the yaw is within one degree.
    """
    _check_version(version)
    fy = norm_angle(-curr_yaw)
    if version == V1 or abs(fy) > 1.0:
        return _sign(fy) * min(abs(fy) * 0.8, 30.0)
    return _sign(fy) * fy * fy * 0.8
