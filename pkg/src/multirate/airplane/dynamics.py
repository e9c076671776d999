"""Turn dynamics of a small fixed-wing aircraft.

Simplified coordinated-turn model: the ailerons drive the roll angle, roll
drives the heading change, and differential wing drag produces an adverse
yaw that the rudder counters. Lift is linear in the surface deflection
angle.

Two unit modes exist. In the default "literal" mode the raw equation
values are fed to the controller integration step unchanged, with
deflection angles in degrees and the period in milliseconds; this is the
arithmetic the verification results are calibrated against. The "si" mode
rescales the rates to per-millisecond units (the turn rate from rad/s, the
roll/yaw accelerations from per-second-squared) for physical plausibility
studies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

LITERAL = "literal"
SI = "si"


class DynamicsError(ValueError):
    """Dynamics left the model's valid envelope (e.g. tangent singularity)."""


@dataclass(frozen=True)
class AirplaneParams:
    plane_size: float = 4.0  # fuselage length, m
    weight: float = 1000.0
    wing_size: float = 2.0  # wing length, m
    virt_lift_const: float = 0.6  # vertical tail
    horz_lift_const: float = 0.4  # ailerons
    drag_ratio: float = 0.05
    velocity: float = 50.0  # m/s
    gravity: float = 9.80555  # m/s^2
    sub_diff_angle: float = 5.0  # max surface movement per fast step, degrees
    units_mode: str = LITERAL

    def __post_init__(self):
        for name in (
            "plane_size",
            "weight",
            "wing_size",
            "virt_lift_const",
            "horz_lift_const",
            "drag_ratio",
            "velocity",
            "gravity",
        ):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0.1 <= self.sub_diff_angle <= 45.0:
            raise ValueError("sub_diff_angle must lie in [0.1, 45]")
        if self.units_mode not in (LITERAL, SI):
            raise ValueError(f"unknown units_mode {self.units_mode!r}")


def norm_angle(x: float) -> float:
    """Normalize an angle to the half-open range (-180, 180]."""
    if not math.isfinite(x):
        raise ValueError(f"angle must be finite, got {x!r}")
    r = math.fmod(x, 360.0)
    if r <= -180.0:
        r += 360.0
    elif r > 180.0:
        r -= 360.0
    return r


def lift(lift_const: float, angle: float) -> float:
    """Lift force generated by a control surface deflected by `angle`."""
    return lift_const * angle


def d_psi(roll: float, velocity: float, params: AirplaneParams) -> float:
    """Turn rate induced by banking: (g / v) * tan(roll)."""
    if abs(roll) >= 90.0:
        raise DynamicsError(f"tangent singularity: |roll| = {abs(roll)} >= 90")
    rate = (params.gravity / velocity) * math.tan(math.radians(roll))
    if params.units_mode == SI:
        rate *= 180.0 / math.pi / 1000.0  # rad/s -> deg/ms
    return rate


def d_phi(left_aileron: float, right_aileron: float, params: AirplaneParams) -> float:
    """Roll acceleration from differential aileron lift."""
    rate = (
        lift(params.horz_lift_const, right_aileron)
        - lift(params.horz_lift_const, left_aileron)
    ) / (params.weight * params.wing_size)
    if params.units_mode == SI:
        rate /= 1.0e6  # per s^2 -> per ms^2
    return rate


def d_beta(
    left_aileron: float, right_aileron: float, rudder: float, params: AirplaneParams
) -> float:
    """Yaw acceleration: adverse drag from the ailerons plus rudder side lift."""
    rate = params.drag_ratio * (
        lift(params.horz_lift_const, right_aileron)
        - lift(params.horz_lift_const, left_aileron)
    ) / (params.weight * params.wing_size) + lift(
        params.virt_lift_const, rudder
    ) / (params.weight * params.plane_size)
    if params.units_mode == SI:
        rate /= 1.0e6
    return rate
