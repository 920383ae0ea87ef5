"""Keeping the next qubit on top of the stack in constant depth.

Each step relabels the used qubit with its next-use step and runs two
rounds of parallel compare-swaps. The needed qubit is always on top exactly
when required, at depth two per step regardless of stack size.
"""

import numpy as np

from colexjump.noise import trial_rng
from colexjump.scheduler import StackState, advance, init_labels, schedule, verify

print("== one step, traced ==")
state = StackState.initial([10, 11, 12, 13], [1, 2, 3, 4])
print(f"  labels {state.labels.tolist()}, top qubit {state.qubit_ids[0]} used at step 1")
state, (round1, round2) = advance(state, next_use_of_top=5)
print(f"  relabel top to 5, round 1 swaps {round1}, round 2 swaps {round2}")
print(f"  labels now {state.labels.tolist()} -> top label equals the next step")

print("\n== a qubit sinks two positions per step while unused ==")
state = StackState.initial(list(range(8)), list(range(1, 9)))
for step in range(3):
    state, _ = advance(state, 100 + step)
    print(f"  after step {step+1}: {state.labels.tolist()}")

print("\n== scheduling a random workload ==")
rng = trial_rng(0, 0)
sequence = rng.integers(0, 24, size=200).tolist()
sched = schedule(sequence, range(32))
swap_counts = [len(r1) + len(r2) for r1, r2 in sched.steps]
print(f"  {len(sched.steps)} steps on a 32-deep stack")
print(f"  swaps per step: min {min(swap_counts)}, max {max(swap_counts)}, "
      f"depth always exactly 2 rounds")
print(f"  verifier: {'OK' if verify(sched) else 'VIOLATION'}")

print("\n== the verifier catches a single missing swap ==")
for si, (r1, r2) in enumerate(sched.steps):
    if r1:
        sched.steps[si] = (r1[1:], r2)
        break
result = verify(sched)
print(f"  {result.violation!r} at step {result.step}")
