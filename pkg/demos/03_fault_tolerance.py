"""Why the flux indirection matters.

The direct collapse (read the outer syndrome, apply a restricted gauge
operator) is broken by any single pre-existing outer error: the corrections
available are products of edge operators, all of even weight, so an
odd-weight error always leaves an odd-weight - hence logical - residual.
The flux-based collapse survives every single fault.
"""

import numpy as np

import colexjump as cj
from colexjump.jump import embed_operator, ideal_collapse, ideal_decode_2d, logical_operator
from colexjump.montecarlo import exhaustive_weight1_collapse
from colexjump.pauli import PauliOperator

ctx = cj.make_context(cj.minimal_colex(3), facet="rgb")

print("== direct collapse vs a single outer X error ==")
flips = 0
for q in range(ctx.n2):
    state = cj.encoded_3d(ctx, "zero")
    state.apply(
        embed_operator(
            PauliOperator.from_support(ctx.n2, "X", [q]), ctx.n3, ctx.split.outer_vertices
        )
    )
    out = ideal_collapse(ctx, state, cj.trial_rng(1, q))
    ideal_decode_2d(ctx, out.residual_state)
    value = out.residual_state.expect(logical_operator(ctx.code2, "Z"))
    flips += value != 1
print(f"  logical failures: {flips} of {ctx.n2} single outer errors")

print("\n== flux-based collapse vs every single fault ==")
failures = exhaustive_weight1_collapse(ctx)
n_faults = 2 * (ctx.n3 * 3 + sum(len(ctx.duals[p]) for p in ctx.pairs) * 2)
print(f"  faults checked: {n_faults} (all single-qubit Paulis and readout lies)")
print(f"  logical failures: {len(failures)}")

print("\n== single-shot error correction on the inner code ==")
inner = ctx.inner_code
for q in range(inner.n):
    state = cj.encoded_state(inner, None)
    state.apply(PauliOperator.from_support(inner.n, "X", [q]))
    state, report = cj.single_shot_ec(state, inner, "Z", 0.0, cj.trial_rng(2, q))
    assert all(state.expect(g) == 1 for g in inner.S.generators)
print(f"  all {inner.n} single bit flips corrected exactly "
      f"(weight-1 corrections every time)")
