"""Collapse, blow-up, and single-shot error correction."""

import numpy as np
import pytest

from colexjump.jump import (
    blow_up,
    collapse,
    discard_qubits,
    embed_operator,
    encoded_3d,
    encoded_state,
    ideal_collapse,
    ideal_decode_2d,
    logical_operator,
    single_shot_ec,
)
from colexjump.noise import trial_rng
from colexjump.pauli import PauliOperator
from colexjump.tableau import Tableau, from_stabilizers


def test_noiseless_collapse_preserves_logicals(ctx):
    for logical, kind in (("zero", "Z"), ("plus", "X")):
        state = encoded_3d(ctx, logical)
        out = collapse(ctx, state, 0.0, trial_rng(0, 0))
        assert out.logical_flip_flags[kind] == 1
        for g in ctx.code2.S.generators:
            assert out.residual_state.expect(g) == 1


def test_trivial_syndrome_identity_correction(ctx):
    state = encoded_3d(ctx, "zero")
    out = collapse(ctx, state, 0.0, trial_rng(0, 1))
    assert out.applied_correction["X"].is_identity()
    assert out.applied_correction["Z"].is_identity()
    assert all(
        v == 1 for rec in out.measurement_record.values() for v in rec.values()
    )


def test_ideal_collapse_noiseless(ctx):
    state = encoded_3d(ctx, "zero")
    out = ideal_collapse(ctx, state, trial_rng(0, 2))
    assert out.logical_flip_flags["Z"] == 1


def test_ideal_collapse_not_fault_tolerant(ctx):
    """A pre-existing single outer-qubit X error survives the direct
    collapse as a logical for most qubits: the restricted-gauge correction
    matching the shifted syndrome differs from the error by a logical. The
    flux-based collapse handles every one of these (see the exhaustive
    weight-1 tests); this is the contrast that motivates the indirection."""
    outcomes = {}
    for q_outer in range(ctx.n2):
        state = encoded_3d(ctx, "zero")
        state.apply(
            embed_operator(
                PauliOperator.from_support(ctx.n2, "X", [q_outer]),
                ctx.n3,
                ctx.split.outer_vertices,
            )
        )
        out = ideal_collapse(ctx, state, trial_rng(0, 3))
        ideal_decode_2d(ctx, out.residual_state)
        outcomes[q_outer] = out.residual_state.expect(
            logical_operator(ctx.code2, "Z")
        )
    # On this instance every single outer error fails: restricted-gauge
    # corrections are products of edge operators and therefore have even
    # weight, so correcting an odd-weight error always leaves an odd-weight
    # residual, which can never be a stabilizer.
    assert all(v == -1 for v in outcomes.values())


def test_collapse_weight1_fault_tolerance_sample(ctx):
    """Spot version of the acceptance criterion: single faults never flip
    the logical after the final ideal decode."""
    # qubit faults
    for q in (0, 7, 14):
        for kind in ("X", "Z"):
            state = encoded_3d(ctx, "zero" if kind == "X" else "plus")
            state.apply(PauliOperator.from_support(ctx.n3, kind, [q]))
            out = collapse(ctx, state, 0.0, trial_rng(1, q))
            ideal_decode_2d(ctx, out.residual_state)
            track = "Z" if kind == "X" else "X"
            assert out.residual_state.expect(logical_operator(ctx.code2, track)) == 1
    # measurement flips
    for pair in ctx.pairs:
        for ei in range(len(ctx.duals[pair])):
            state = encoded_3d(ctx, "zero")
            out = collapse(
                ctx, state, 0.0, trial_rng(1, 50 + ei), injected_flips={(pair, "Z"): {ei}}
            )
            ideal_decode_2d(ctx, out.residual_state)
            assert out.residual_state.expect(logical_operator(ctx.code2, "Z")) == 1


def test_single_flip_residual_bounded_by_K(ctx):
    """Residual after one measurement flip is at most K_hat per repaired
    flux-line edge."""
    from colexjump.noise import measure_K

    for pair in ctx.pairs:
        k_hat = measure_K(ctx, pair, 4)
        for ei in range(len(ctx.duals[pair])):
            state = encoded_3d(ctx, "zero")
            out = collapse(
                ctx, state, 0.0, trial_rng(2, ei), injected_flips={(pair, "Z"): {ei}}
            )
            delta0, gamma_eff, true_flux = out.repair_record[(pair, "Z")]
            omega = set(delta0) ^ {ei}
            residual = out.applied_correction["X"]
            assert residual.weight <= k_hat * max(len(omega), 1) + 1e-9


def test_inner_error_absorbed_as_measurement_error(ctx):
    """A pre-existing single inner-qubit error produces exactly the records
    and outer state of the equivalent measurement-flip pattern."""
    inner = ctx.split.inner_vertices
    inner_set = set(inner)
    for v in inner:
        state_err = encoded_3d(ctx, "zero")
        state_err.apply(PauliOperator.from_support(ctx.n3, "X", [v]))
        out_err = collapse(ctx, state_err, 0.0, trial_rng(3, v))
        # equivalent flips: Z-plaquettes of the facet pairs containing v
        flips = {}
        for pair in ctx.pairs:
            hot = {
                i
                for i, dual in enumerate(ctx.duals[pair])
                if v in ctx.colex3.plaquette_vertices(dual.plaquette)
            }
            if hot:
                flips[(pair, "Z")] = hot
        state_ref = encoded_3d(ctx, "zero")
        out_ref = collapse(ctx, state_ref, 0.0, trial_rng(3, v), injected_flips=flips)
        assert out_err.measurement_record == out_ref.measurement_record
        # observed repairs agree; the underlying true flux legitimately
        # differs (the error really flips the plaquette vs. a readout lie)
        for key in out_err.repair_record:
            d0_err, ge_err, _ = out_err.repair_record[key]
            d0_ref, ge_ref, _ = out_ref.repair_record[key]
            assert (d0_err, ge_err) == (d0_ref, ge_ref)
        for kind in ("X", "Z"):
            assert out_err.applied_correction[kind] == out_ref.applied_correction[kind]
        assert out_err.logical_flip_flags == out_ref.logical_flip_flags


def test_blow_up_noiseless_initializes_everything(ctx):
    rng = trial_rng(4, 0)
    for logical, kind in (("zero", "Z"), ("plus", "X")):
        state2 = encoded_state(ctx.code2, logical)
        state3, report = blow_up(ctx, state2, 0.0, rng)
        assert all(v == 1 for v in report.cell_expectations.values())
        big = embed_operator(
            logical_operator(ctx.code2, kind), ctx.n3, ctx.split.outer_vertices
        )
        assert state3.expect(big) == 1


def test_roundtrip_preserves_logicals(ctx):
    rng = trial_rng(5, 0)
    for trial in range(10):
        logical = "zero" if trial % 2 == 0 else "plus"
        kind = "Z" if logical == "zero" else "X"
        state2 = encoded_state(ctx.code2, logical)
        state3, _ = blow_up(ctx, state2, 0.0, rng)
        out = collapse(ctx, state3, 0.0, rng)
        assert out.logical_flip_flags[kind] == 1


def test_blow_up_from_random_inner_product_states(ctx):
    """The inner code encodes nothing, so correction initializes it from any
    starting product state: every trial must end with all stabilizers +1."""
    rng = trial_rng(6, 0)
    for trial in range(25):
        state2 = encoded_state(ctx.code2, "zero")
        rows = [
            embed_operator(state2.stabilizer_row(i), ctx.n3, ctx.split.outer_vertices)
            for i in range(ctx.n2)
        ]
        for v in ctx.split.inner_vertices:
            basis = "Z" if rng.random() < 0.5 else "X"
            sign = 1 if rng.random() < 0.5 else -1
            rows.append(
                PauliOperator(
                    ctx.n3,
                    *(
                        ([0] * ctx.n3, _one_hot(ctx.n3, v))
                        if basis == "Z"
                        else (_one_hot(ctx.n3, v), [0] * ctx.n3)
                    ),
                    sign=sign,
                )
            )
        state3 = from_stabilizers(rows)
        for basis in ("Z", "X"):
            state3, _ = single_shot_ec(
                state3, ctx.inner_code, basis, 0.0, rng, embed=list(ctx.split.inner_vertices)
            )
        for g in ctx.inner_code.S.generators:
            embedded = embed_operator(g, ctx.n3, ctx.split.inner_vertices)
            assert state3.expect(embedded) == 1


def _one_hot(n, v):
    out = np.zeros(n, dtype=np.uint8)
    out[v] = 1
    return out


def test_single_shot_inner_corrects_single_flips(ctx, inner_code):
    for q in range(inner_code.n):
        state = encoded_state(inner_code, None)
        state.apply(PauliOperator.from_support(inner_code.n, "X", [q]))
        state, report = single_shot_ec(state, inner_code, "Z", 0.0, trial_rng(7, q))
        assert all(state.expect(g) == 1 for g in inner_code.S.generators)
        assert report.correction.weight == 1


def test_single_shot_inner_measurement_flip_bounded(ctx, inner_code):
    """A single wrong measurement leaves residual weight at most K per
    repaired edge (here: weight <= 2)."""
    from colexjump.jump import _code_dual_structure

    _, by_pair = _code_dual_structure(inner_code)
    for pair, entries in by_pair.items():
        for pi, _, _ in entries:
            state = encoded_state(inner_code, None)
            state, report = _ec_with_flip(state, inner_code, pi)
            violated = [
                g for g in inner_code.S.generators if state.expect(g) != 1
            ]
            assert report.correction.weight <= 2
            # residual after one flip is cleanable by one ideal round
            state, _ = single_shot_ec(state, inner_code, "Z", 0.0, trial_rng(8, pi))
            state, _ = single_shot_ec(state, inner_code, "X", 0.0, trial_rng(8, pi))
            assert all(state.expect(g) == 1 for g in inner_code.S.generators)


def _ec_with_flip(state, code, flip_pi):
    """single_shot_ec with exactly one recorded outcome inverted."""
    from colexjump import jump as jump_mod

    original = Tableau.measure

    def patched(self, op, rng=None, force=None):
        return original(self, op, rng, force)

    # simplest approach: run the measurement loop manually mirroring
    # single_shot_ec but flipping one record; reuse internals instead
    return _single_shot_with_flip(state, code, "Z", flip_pi)


def _single_shot_with_flip(state, code, basis, flip_pi):
    """Copy of the single_shot_ec flow with one outcome inverted."""
    from colexjump.boundary import boundary_structure
    from colexjump.colex import color_set
    from colexjump.flux import plaquette_operator
    from colexjump.jump import (
        SingleShotReport,
        _code_dual_structure,
        _match_cells_to_edges,
        _syndrome_fn,
        min_weight_table,
    )

    structure, by_pair = _code_dual_structure(code)
    colex = code.colex
    outcomes = {}
    for pair in sorted(by_pair):
        for pi, _, _ in by_pair[pair]:
            op = plaquette_operator(colex, pi, basis)
            value = state.measure(op, trial_rng(9, pi))
            if pi == flip_pi:
                value = -value
            outcomes[pi] = value
    estimates = {ci: [] for ci in range(len(colex.cells))}
    for ci, (vs, cs) in enumerate(colex.cells):
        for i, a in enumerate(cs):
            for b in cs[i + 1 :]:
                pair = color_set((a, b))
                prod = 1
                for pi in range(len(colex.plaquettes)):
                    if colex.plaquette_colors(pi) == pair and set(
                        colex.plaquette_vertices(pi)
                    ) <= set(vs):
                        prod *= outcomes[pi]
                estimates[ci].append(prod)
    cell_syndrome = {
        ci: (1 if sum(1 for v in vals if v == -1) <= len(vals) // 2 else -1)
        for ci, vals in estimates.items()
    }
    repaired = dict(outcomes)
    for pair in sorted(by_pair):
        entries = by_pair[pair]
        mismatched = []
        for ci in range(len(colex.cells)):
            if not set(pair) <= set(colex.cell_colors(ci)):
                continue
            prod = 1
            for pi, cells, _ in entries:
                if ci in cells:
                    prod *= outcomes[pi]
            if prod != cell_syndrome[ci]:
                mismatched.append(ci)
        if mismatched:
            for pi in _match_cells_to_edges(entries, mismatched):
                repaired[pi] = -repaired[pi]
    syndrome_bits = [cell_syndrome[ci] for ci in range(len(colex.cells))]
    checks = [tuple(vs) for vs, _ in colex.cells]
    y = {c.color for c in structure.corners}.pop()
    for region in structure.regions:
        pair = color_set(set(region.colors) - {y})
        prod = 1
        for pi in region.plaquettes:
            if colex.plaquette_colors(pi) == pair:
                prod *= repaired[pi]
        syndrome_bits.append(prod)
        checks.append(tuple(sorted(region.vertices)))
    syndrome = tuple(0 if v == 1 else 1 for v in syndrome_bits)
    table = min_weight_table(code.n, _syndrome_fn(checks))
    support = table[syndrome]
    correction = PauliOperator.from_support(code.n, "X", support)
    state.apply(correction)
    return state, SingleShotReport(outcomes, cell_syndrome, {}, correction, syndrome)


def test_single_shot_tetra_weight1(ctx, code3):
    """Single qubit errors with noiseless measurements are corrected exactly
    on the tetrahedral code."""
    priority = None
    for q in range(code3.n):
        for kind, basis, track in (("X", "Z", "Z"), ("Z", "X", "X")):
            state = encoded_state(code3, "zero" if track == "Z" else "plus")
            state.apply(PauliOperator.from_support(code3.n, kind, [q]))
            state, _ = single_shot_ec(state, code3, basis, 0.0, trial_rng(10, q))
            assert all(
                state.expect(g) == 1
                for g in code3.S.generators
                if (g.z.any() if basis == "Z" else g.x.any())
            )
            assert state.expect(logical_operator(code3, track)) == 1


def test_discard_rejects_entangled(ctx):
    state = from_stabilizers(
        [PauliOperator.from_string("XX"), PauliOperator.from_string("ZZ")]
    )
    with pytest.raises(ValueError):
        discard_qubits(state, [1])
