"""Bounded reachability search: hunt for unsafe yaw angles.

`search` walks the reachable states breadth-first up to a time bound and
returns the first states satisfying a predicate, each with its shortest
witness path. Because every status record of the last 600 ms sits on the
output port, the predicate sees all 60 ms rounds, not just step
boundaries.

Run:  python demos/03_safety_search.py
"""

from multirate import initial_state, search
from multirate.airplane import TURN_REVERSAL, airplane_props, build_airplane

registry = airplane_props()

for law in ("v1", "v2"):
    s0 = initial_state(build_airplane(scenario=TURN_REVERSAL, law_version=law))
    hits = search(s0, "unsafe-yaw", bound=27000, registry=registry)
    print(f"--- {law}: searching 27 s of flight for any |yaw| >= 1.0 ---")
    if not hits:
        print("No solution (the property holds everywhere within the bound)\n")
        continue
    hit = hits[0]
    print(f"violation after {hit.steps} steps ({hit.state.elapsed_ms} ms):")
    worst = max(hit.state.tree.port("output").content, key=lambda r: abs(r.yaw))
    print(
        f"  worst record: dir {worst.dir:8.3f}  roll {worst.roll:7.3f}  "
        f"yaw {worst.yaw:6.3f}  goal {worst.goal:6.1f}\n"
    )

print(
    "The original laws steer the surfaces proportionally all the way down"
    "\nto zero error, so the rudder keeps overshooting the adverse yaw; the"
    "\nredesign never lets the yaw reach a tenth of the limit."
)
