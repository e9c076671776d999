"""Build a small multirate ensemble from scratch and step it by hand.

A rate-1 thermostat controller supervises a rate-3 heater model: the
heater runs three internal 5 ms steps per 15 ms controller step. The
controller's setpoint commands are padded with bots for the fast machine;
the heater's three temperature reports are averaged back down to one
reading. Demonstrates: components, wiring, adaptors, validation and the
synchronous step.

Run:  python demos/01_build_a_toy_ensemble.py
"""

from multirate import (
    BOT,
    Component,
    EnsembleBody,
    EnvChoice,
    EnvIn,
    EnvOut,
    IN,
    Leaf,
    OUT,
    Port,
    Wire,
    initial_state,
    pad_with_bots,
    sync_step,
    validate,
)


# --- machine behaviors ------------------------------------------------------
# A behavior is a pure function (state, inputs, period) -> (state, outputs):
# one value is consumed per input port (BOT when nothing arrived) and one
# value must be produced per output port.


def thermostat(state, inputs, period):
    """Compares the averaged temperature with the 21 degree setpoint and
    commands heater power 0.0 or 1.0."""
    reading = inputs["temp"]
    if isinstance(reading, float):
        state = reading
    power = 1.0 if state < 21.0 else 0.0
    return state, {"power": power, "display": state}


def heater(state, inputs, period):
    """First-order heating/cooling toward 15 deg (off) or 25 deg (full).

    The controller only commands once per slow step, so the fast steps in
    between read bot; the heater then keeps the last commanded power, the
    usual idiom for rate-padded inputs."""
    temp, power = state
    command = inputs["power"]
    if isinstance(command, float):
        power = command
    target = 15.0 + 10.0 * power
    temp = temp + 0.25 * (target - temp)
    return (temp, power), {"temp": temp}


def average(values):
    nums = [v for v in values if isinstance(v, float)]
    return (sum(nums) / len(nums),)


# --- wiring -----------------------------------------------------------------

controller = Component(
    "controller", 1, 15,
    (Port("temp", IN), Port("power", OUT), Port("display", OUT)),
    Leaf(18.0, thermostat),
)
plant = Component(
    "plant", 3, 5,
    (Port("power", IN), Port("temp", OUT)),
    Leaf((18.0, 0.0), heater),
)
room = Component(
    "room", 1, 15,
    (Port("setpoint", IN), Port("display", OUT)),
    EnsembleBody(
        (controller, plant),
        (
            EnvIn("setpoint", "controller", "temp"),  # unused here; see note
            Wire("plant", "temp", "controller", "temp"),
            Wire("controller", "power", "plant", "power"),
            EnvOut("controller", "display", "display"),
        ),
        {
            ("controller", "temp"): average,
            ("plant", "power"): pad_with_bots(3),
        },
    ),
)

issues = validate(room)
print("validation:", issues or "clean, but read on")

# The wiring above is deliberately wrong: controller.temp has two sources
# (the environment setpoint and the plant feedback). Every input port needs
# exactly one source, so we rebuild with the environment port dropped.

room = Component(
    "room", 1, 15,
    (Port("display", OUT),),
    EnsembleBody(
        (controller, plant),
        (
            Wire("plant", "temp", "controller", "temp"),
            Wire("controller", "power", "plant", "power"),
            EnvOut("controller", "display", "display"),
        ),
        {
            ("controller", "temp"): average,
            ("plant", "power"): pad_with_bots(3),
        },
    ),
)
print("validation after fix:", validate(room))

# --- stepping ---------------------------------------------------------------

state = initial_state(room)
print("\n step   display   plant temp")
for step in range(1, 11):
    state = sync_step(state, EnvChoice())
    display = state.tree.port("display").content[-1]
    plant_temp = state.tree.machine("plant").body.state[0]
    print(f"{step:5}   {display:7.3f}   {plant_temp:10.3f}")

print(
    "\nThe display lags the plant by one step: feedback wires deliver at the"
    "\nnext synchronous instant. The temperature hunts around the 21 degree"
    "\nsetpoint, as bang-bang control with a one-step-late sensor must."
)
