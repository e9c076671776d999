"""Wiring of the two-level turning control ensemble and its propositions.

The top ensemble couples the pilot console (600 ms) with the control
system, itself an ensemble running ten 60 ms rounds per pilot step: the
main controller (rate 1) exchanges commands and surface angles with the
two aileron controllers (rate 4, 15 ms) and the rudder controller (rate 3,
20 ms) over feedback wires. Every main-controller round appends one status
record to the top output port, so each top-level step exposes the full
60 ms-resolution history of the past 600 ms.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from ..analysis import PropRegistry
from ..model import (
    BOT,
    IN,
    OUT,
    Bot,
    Component,
    Connection,
    EnsembleBody,
    EnvChoice,
    EnvIn,
    EnvOut,
    Leaf,
    ModelError,
    Port,
    Status,
    SystemState,
    Value,
    Wire,
    pad_with_bots,
    take_last,
)
from ..semantics import initial_state, validate
from .control import LAW_VERSIONS, V2
from .dynamics import AirplaneParams, norm_angle
from .machines import MainState, PilotState, SubState, make_main_behavior, pilot_behavior, sub_behavior

# The three deterministic turn scenarios (heading increments, one per
# 600 ms pilot step) and the inputs of the nondeterministic pilot.
TURN_GRADUAL = (10.0,) * 6
TURN_IMMEDIATE = (60.0,)
TURN_REVERSAL = (-30.0, 90.0)
HOLD_COURSE = (0.0,) * 6
PILOT_RULES = (0.0, 10.0, -10.0, 60.0, -60.0)

SCENARIOS = {
    "gradual": TURN_GRADUAL,
    "immediate": TURN_IMMEDIATE,
    "reversal": TURN_REVERSAL,
    "hold": HOLD_COURSE,
}


def _scenario_values(scenario: Iterable[float | Value]) -> tuple[Value, ...]:
    out = []
    for v in scenario:
        if isinstance(v, Bot):
            out.append(BOT)
        elif isinstance(v, (int, float)) and not isinstance(v, bool):
            out.append(float(v))
        else:
            raise ModelError(f"scenario entries must be numbers or bot, got {v!r}")
    return tuple(out)


def build_airplane(
    params: AirplaneParams | None = None,
    scenario: Iterable[float | Value] = (),
    law_version: str = V2,
    env_rules: Iterable[float] | None = None,
    *,
    check: bool = True,
    period_overrides: Mapping[str, int] | None = None,
    extra_csystem_connections: Sequence[Connection] = (),
) -> Component:
    """Assemble the airplane model; all angles start at zero, ports empty.

    `env_rules` lists the alternative outer pilot inputs (one number per
    rule) of a nondeterministic run; None builds the closed deterministic
    model. `period_overrides` and `extra_csystem_connections` exist for
    fault-injection demos and are validated like everything else.
    """
    if params is None:
        params = AirplaneParams()
    if law_version not in LAW_VERSIONS:
        raise ModelError(f"unknown law version {law_version!r}")
    overrides = dict(period_overrides or {})

    def period(machine_id: str, default: int) -> int:
        return int(overrides.pop(machine_id, default))

    sub0 = SubState(0.0, 0.0, params.sub_diff_angle)
    main0 = MainState(params.velocity, 0.0, 0.0, 0.0, 0.0, law_version)
    pilot0 = PilotState(_scenario_values(scenario))
    main_behavior = make_main_behavior(params)

    def io_ports(*extra: Port) -> tuple[Port, ...]:
        return (Port("input", IN), Port("output", OUT)) + extra

    left = Component("left", 4, period("left", 15), io_ports(), Leaf(sub0, sub_behavior))
    right = Component("right", 4, period("right", 15), io_ports(), Leaf(sub0, sub_behavior))
    rudder = Component("rudder", 3, period("rudder", 20), io_ports(), Leaf(sub0, sub_behavior))
    main = Component(
        "main",
        1,
        period("main", 60),
        (
            Port("input", IN),
            Port("output", OUT),
            Port("inLW", IN),
            Port("outLW", OUT),
            Port("inRW", IN),
            Port("outRW", OUT),
            Port("inTW", IN),
            Port("outTW", OUT),
        ),
        Leaf(main0, main_behavior),
    )

    csystem_connections: tuple[Connection, ...] = (
        EnvIn("input", "main", "input"),
        EnvOut("main", "output", "output"),
        Wire("left", "output", "main", "inLW"),
        Wire("main", "outLW", "left", "input"),
        Wire("right", "output", "main", "inRW"),
        Wire("main", "outRW", "right", "input"),
        Wire("rudder", "output", "main", "inTW"),
        Wire("main", "outTW", "rudder", "input"),
    ) + tuple(extra_csystem_connections)

    csystem = Component(
        "csystem",
        10,
        period("csystem", 60),
        io_ports(),
        EnsembleBody(
            (main, left, right, rudder),
            csystem_connections,
            {
                ("left", "input"): pad_with_bots(4),
                ("right", "input"): pad_with_bots(4),
                ("rudder", "input"): pad_with_bots(3),
                ("main", "*"): take_last,
            },
        ),
    )

    pilot = Component(
        "pilot", 1, period("pilot", 600), io_ports(), Leaf(pilot0, pilot_behavior)
    )

    rules = None
    if env_rules is not None:
        rules = tuple(EnvChoice.of({"input": float(x)}) for x in env_rules)

    airplane = Component(
        "airplane",
        1,
        period("airplane", 600),
        io_ports(),
        EnsembleBody(
            (pilot, csystem),
            (
                EnvIn("input", "pilot", "input"),
                Wire("pilot", "output", "csystem", "input"),
                EnvOut("csystem", "output", "output"),
            ),
            {
                ("pilot", "input"): take_last,
                ("csystem", "input"): pad_with_bots(10),
            },
        ),
        env_rules=rules,
    )

    if overrides:
        raise ModelError(f"period overrides for unknown machines: {sorted(overrides)}")
    if check:
        issues = validate(airplane)
        if issues:
            raise ModelError(
                "airplane model failed validation:\n"
                + "\n".join(str(i) for i in issues)
            )
    return airplane


def airplane_initial_state(*args, **kwargs) -> SystemState:
    return initial_state(build_airplane(*args, **kwargs))


# ---------------------------------------------------------------------------
# State propositions over the top output port's status history.


def output_records(state: SystemState) -> tuple[Status, ...]:
    content = state.tree.port("output").content
    for v in content:
        if not isinstance(v, Status):
            raise ModelError(f"output port holds a non-status value: {v!r}")
    return content


def safe_yaw_all(state: SystemState) -> bool:
    """Every status record of the last step has |yaw| < 1.0 (true if none)."""
    return all(abs(r.yaw) < 1.0 for r in output_records(state))


def stable_all(state: SystemState) -> bool:
    """Every status record has |yaw| < 0.5 and |roll| < 0.5 (true if none)."""
    return all(abs(r.yaw) < 0.5 and abs(r.roll) < 0.5 for r in output_records(state))


def reach(state: SystemState) -> bool:
    """The most recent record is within 0.5 degrees of the goal direction."""
    records = output_records(state)
    if not records:
        return False
    last = records[-1]
    return abs(norm_angle(last.goal - last.dir)) < 0.5


def airplane_props() -> PropRegistry:
    """Registry with the standard propositions and their negated aliases."""
    registry = PropRegistry()
    registry.register("safeYaw", safe_yaw_all)
    registry.register("stable", stable_all)
    registry.register("reach", reach)
    registry.register("reached", reach)
    registry.register("unsafeYaw", lambda s: not safe_yaw_all(s))
    registry.register("unsafe-yaw", lambda s: not safe_yaw_all(s))
    registry.register("unstable", lambda s: not stable_all(s))
    return registry
