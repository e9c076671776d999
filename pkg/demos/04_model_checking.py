"""Time-bounded LTL model checking of the turn controller.

The liveness-and-safety requirement reads: whenever the aircraft is not
stable, the yaw must stay safe until the goal direction is reached with a
stable attitude. Formally:

    [] (~ stable -> (safeYaw U (reach /\\ stable)))

The checker explores every behavior up to the bound (closing truncated
paths with self-loops), builds the Buchi automaton of the negated formula
and searches their product for an accepting lasso.

Run:  python demos/04_model_checking.py
The nondeterministic part explores a six-figure state space and takes a
few minutes; comment it out for a quick look.
"""

import time

from multirate import check_ltl, initial_state
from multirate.airplane import (
    HOLD_COURSE,
    PILOT_RULES,
    TURN_REVERSAL,
    airplane_props,
    build_airplane,
)

FORMULA = "[] (~ stable -> (safeYaw U (reach /\\ stable)))"
registry = airplane_props()

# -- deterministic: one fixed scenario per run -------------------------------

for law in ("v1", "v2"):
    s0 = initial_state(build_airplane(scenario=TURN_REVERSAL, law_version=law))
    result = check_ltl(s0, FORMULA, 7200, registry)
    print(f"{law}, reversal scenario, bound 7200 ms: "
          f"{'holds' if result.holds else 'VIOLATED'} "
          f"({result.explored} states)")
    if not result.holds:
        cex = result.counterexample
        print(f"  counterexample: {len(cex.prefix)} prefix steps, "
              f"{len(cex.cycle)} cycle steps")

# -- nondeterministic: the pilot injects one of five inputs every step -------

print("\nnondeterministic pilot (inputs 0, +-10, +-60 added each 600 ms)...")
s0 = initial_state(build_airplane(scenario=HOLD_COURSE, env_rules=PILOT_RULES))
t0 = time.perf_counter()
result = check_ltl(s0, FORMULA, 18000, registry)
print(f"bound 18000 ms: {'holds' if result.holds else 'VIOLATED'} "
      f"after exploring {result.explored} states "
      f"in {time.perf_counter() - t0:.0f}s")
