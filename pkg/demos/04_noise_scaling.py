"""Failure rates under phenomenological noise, and the lattice constant.

Sweeps the qubit/measurement error rate through a seeded Monte Carlo run,
prints Wilson intervals, and measures the constant relating flux length to
correction support.
"""

import colexjump as cj
from colexjump.montecarlo import run_collapse_trials, stats_csv_rows

ctx = cj.make_context(cj.minimal_colex(3), facet="rgb")

print("== collapse failure rate vs noise (20000 trials per point) ==")
points = []
for rate in (0.001, 0.005, 0.02, 0.05, 0.1):
    spec = cj.NoiseSpec(p_qubit=rate, q_meas=rate, seed=42)
    stats = run_collapse_trials(ctx, spec, 20_000)
    points.append((spec, stats))
for row in stats_csv_rows(points):
    print(
        f"  p=q={row['p']:<6} failures {row['failures']:>5}/{row['trials']}"
        f"  rate {row['failure_rate']:.4f}"
        f"  3-sigma [{row['wilson_low_3sigma']:.4f}, {row['wilson_high_3sigma']:.4f}]"
    )

print("\n== repair statistics at p=q=0.05 ==")
stats = run_collapse_trials(ctx, cj.NoiseSpec(0.05, 0.05, seed=7), 20_000)
print("  delta0 size histogram:", dict(sorted(stats.delta0_hist.items())))
print("  residual weight histogram:", dict(sorted(stats.residual_weight_hist.items())))
print("  largest residual cluster:", stats.max_residual_component)

print("\n== lattice constant: correction support per flux edge ==")
for pair in ctx.pairs:
    print(f"  K_hat[{pair}] =", cj.measure_K(ctx, pair, length_cap=4))

print("\n== the iid readout-noise model is inclusion-bounded by its rate ==")
bound = cj.alpha_bound_analytic(0.02, edge_count=6)
print("  alpha =", bound.alpha, " direct-summation check:", bound.verify())
