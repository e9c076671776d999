"""Simulate the three turning scenarios and compare both control laws.

Each pilot step lasts 600 ms; the control system underneath runs the main
controller every 60 ms and the wing/rudder surfaces at 15/20 ms. Every
60 ms round leaves one status record on the top output port, so a 6 s run
yields a 100-point profile of direction, roll and yaw.

Run:  python demos/02_turn_simulation.py
Writes turn-profile-*.csv next to this script.
"""

from pathlib import Path

from multirate import initial_state, simulate
from multirate.airplane import (
    TURN_GRADUAL,
    TURN_IMMEDIATE,
    TURN_REVERSAL,
    build_airplane,
    norm_angle,
    output_records,
)

HERE = Path(__file__).resolve().parent
SCENARIOS = {
    "gradual": TURN_GRADUAL,      # +10 deg per pilot step for six steps
    "immediate": TURN_IMMEDIATE,  # +60 deg at once
    "reversal": TURN_REVERSAL,    # -30 deg, then +90 one step later
}


def profile(law, scenario):
    s0 = initial_state(build_airplane(scenario=scenario, law_version=law))
    trace = simulate(s0, None, 6000)
    records = []
    for state in trace.states[1:]:
        records.extend(output_records(state))
    return records


def summarize(records):
    last = records[-1]
    return {
        "heading error": abs(norm_angle(last.goal - last.dir)),
        "final roll": abs(last.roll),
        "max |roll|": max(abs(r.roll) for r in records),
        "max |yaw|": max(abs(r.yaw) for r in records),
    }


for name, scenario in SCENARIOS.items():
    print(f"=== scenario {name} (increments {list(scenario)}) ===")
    for law in ("v1", "v2"):
        records = profile(law, scenario)
        stats = summarize(records)
        flags = []
        if stats["max |yaw|"] >= 1.0:
            flags.append("UNSAFE YAW")
        print(
            f"  {law}: heading error {stats['heading error']:6.3f}  "
            f"final roll {stats['final roll']:6.3f}  "
            f"max roll {stats['max |roll|']:6.2f}  "
            f"max yaw {stats['max |yaw|']:6.3f}  {' '.join(flags)}"
        )
        if law == "v2":
            path = HERE / f"turn-profile-{name}.csv"
            with path.open("w", encoding="utf-8") as fh:
                fh.write("time_ms,dir,roll,yaw,goal\n")
                for i, r in enumerate(records, start=1):
                    fh.write(f"{i * 60},{r.dir!r},{r.roll!r},{r.yaw!r},{r.goal!r}\n")
            print(f"      wrote {path.name}")

print(
    "\nThe redesigned laws (v2) slew the goal roll and square the response"
    "\nnear zero error: the yaw stays an order of magnitude below the safety"
    "\nthreshold that the original laws cross in the reversal scenario."
)
