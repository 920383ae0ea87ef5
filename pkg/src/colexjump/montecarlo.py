"""Seeded Monte Carlo harness for collapse and single-shot experiments.

Each trial is keyed by (seed, trial index) through a counter-based
generator, so any partition of trials over workers reproduces identical
statistics. Residual errors are tracked exactly: the harness knows the
injected noise, the true flux, and the applied corrections, so the residual
class (syndrome plus logical action) is computed algebraically and reduced
to its minimum-weight representative for the histograms.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .jump import (
    JumpContext,
    collapse,
    decode_table_2d,
    encoded_3d,
    encoded_state,
    ideal_decode_2d,
    logical_operator,
    min_weight_table,
    single_shot_ec,
    _syndrome_fn,
)
from .noise import NoiseSpec, sample_qubit_noise, trial_rng
from .pauli import PauliOperator


@dataclass
class TrialStats:
    trials: int = 0
    failures: Counter = field(default_factory=Counter)  # logical kind -> count
    residual_weight_hist: Counter = field(default_factory=Counter)
    delta0_hist: Counter = field(default_factory=Counter)
    max_residual_component: int = 0

    def merge(self, other: "TrialStats") -> "TrialStats":
        out = TrialStats(
            self.trials + other.trials,
            self.failures + other.failures,
            self.residual_weight_hist + other.residual_weight_hist,
            self.delta0_hist + other.delta0_hist,
            max(self.max_residual_component, other.max_residual_component),
        )
        return out

    @property
    def total_failures(self) -> int:
        return sum(self.failures.values())

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "failures": dict(sorted(self.failures.items())),
            "residual_weight_hist": {
                str(k): v for k, v in sorted(self.residual_weight_hist.items())
            },
            "delta0_hist": {str(k): v for k, v in sorted(self.delta0_hist.items())},
            "max_residual_component": self.max_residual_component,
        }


def wilson_interval(k: int, n: int, z: float = 3.0) -> tuple[float, float]:
    """z-sigma Wilson score interval for a binomial proportion."""
    if n == 0:
        return 0.0, 1.0
    p = k / n
    denom = 1 + z * z / n
    mid = (p + z * z / (2 * n)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n))
    return max(0.0, mid - half), min(1.0, mid + half)


# -- residual accounting -----------------------------------------------------------


def _class_min_table(ctx: JumpContext):
    """(side syndrome, logical parity) -> minimum weight over the coset."""
    code2 = ctx.code2
    checks = [tuple(vs) for vs, _ in code2.colex.plaquettes]
    syndrome_of = _syndrome_fn(checks)
    table: dict = {}
    for bits in itertools.product((0, 1), repeat=code2.n):
        vec = np.array(bits, dtype=np.uint8)
        w = int(vec.sum())
        key = (syndrome_of(np.flatnonzero(vec)), w % 2)
        if key not in table or w < table[key]:
            table[key] = w
    return table


def _outer_adjacency(ctx: JumpContext):
    adj = {q: set() for q in range(ctx.n2)}
    colex = ctx.code2.colex
    for a, b, _ in colex.edges:
        adj[a].add(b)
        adj[b].add(a)
    for vs, _ in colex.plaquettes:
        for a in vs:
            for b in vs:
                if a != b:
                    adj[a].add(b)
    return adj


def _max_component(support, adj) -> int:
    left = set(support)
    best = 0
    while left:
        seed = left.pop()
        comp = {seed}
        frontier = [seed]
        while frontier:
            v = frontier.pop()
            for w in adj[v]:
                if w in left:
                    left.discard(w)
                    comp.add(w)
                    frontier.append(w)
        best = max(best, len(comp))
    return best


def _class_min_support(ctx: JumpContext, vec: np.ndarray) -> np.ndarray:
    """Minimum-weight member of vec * stabilizer-span (one CSS side)."""
    stabs = [
        np.array(
            [1 if q in set(vs) else 0 for q in range(ctx.n2)], dtype=np.uint8
        )
        for vs, _ in ctx.code2.colex.plaquettes
    ]
    best = vec
    for r in range(len(stabs) + 1):
        for combo in itertools.combinations(stabs, r):
            cand = vec.copy()
            for s in combo:
                cand = cand ^ s
            if cand.sum() < best.sum() or (
                cand.sum() == best.sum()
                and tuple(np.flatnonzero(cand)) < tuple(np.flatnonzero(best))
            ):
                best = cand
    return best


# -- collapse trials ----------------------------------------------------------------


@dataclass
class _TrialResult:
    logical: str
    ex: np.ndarray
    ez: np.ndarray
    records: dict
    repairs: dict
    applied: dict
    flags: dict
    failed: bool


class CollapseEngine:
    """Classical fast path for collapse trials.

    On a freshly prepared encoded state the whole trial is sign-linear:
    plaquette bits never change, Pauli noise only toggles signs, and every
    measured operator stays determinate. An inner plaquette therefore reads
    the parity of the injected error on its support; the outer plaquette
    value after discarding equals the parity on its own support; logical
    flips are support parities of the accumulated error. The engine runs
    that arithmetic directly, drawing random numbers in exactly the same
    order as the tableau pipeline so both produce identical trials (asserted
    in the test suite).
    """

    def __init__(self, ctx: JumpContext):
        self.ctx = ctx
        n2 = ctx.n2
        colex2 = ctx.code2.colex
        self.plaq_masks = [
            _mask(n2, vs) for vs, _ in colex2.plaquettes
        ]
        self.inner_masks = {}
        for pair in ctx.pairs:
            masks = []
            for dual in ctx.duals[pair]:
                masks.append(_mask(ctx.n3, ctx.colex3.plaquette_vertices(dual.plaquette)))
            self.inner_masks[pair] = masks
        if "2d" not in ctx._decode_tables:
            ctx._decode_tables["2d"] = decode_table_2d(ctx.code2)
        self.decode_table = ctx._decode_tables["2d"]
        self.outer_qubits = np.array(ctx.split.outer_vertices)

    def run_trial(self, noise: NoiseSpec, t: int) -> _TrialResult:
        from .flux import FluxConfiguration, repair_flux

        ctx = self.ctx
        rng = trial_rng(noise.seed, t)
        logical = "zero" if t % 2 == 0 else "plus"
        ex, ez = sample_qubit_noise(noise.p_qubit, ctx.n3, rng)
        records = {}
        repairs = {}
        applied = {
            "X": np.zeros(ctx.n2, dtype=np.uint8),
            "Z": np.zeros(ctx.n2, dtype=np.uint8),
        }
        fluxes = {}
        for basis in ("Z", "X"):
            err = ex if basis == "Z" else ez
            for pair in ctx.pairs:
                hot = {
                    i
                    for i, m in enumerate(self.inner_masks[pair])
                    if int(err @ m) % 2 == 1
                }
                fluxes[(pair, basis)] = FluxConfiguration(
                    pair, basis, frozenset(hot), ctx.duals[pair]
                )
        for (pair, basis), flux in fluxes.items():
            observed = flux
            if noise.q_meas > 0:
                flips = {
                    i
                    for i in range(len(flux.duals))
                    if rng.random() < noise.q_meas
                }
                observed = flux ^ flips
            records[(pair, basis)] = {
                flux.duals[i].plaquette: (-1 if i in observed.edges else 1)
                for i in range(len(flux.duals))
            }
            delta0, gamma_eff = repair_flux(observed)
            repairs[(pair, basis)] = (
                tuple(sorted(delta0)),
                tuple(sorted(gamma_eff.edges)),
                tuple(sorted(flux.edges)),
            )
            corr_type = "X" if basis == "Z" else "Z"
            corr = ctx.cached_string_correction(
                gamma_eff.outer_endpoints(), pair, corr_type
            )
            applied[corr_type] ^= corr.x if corr_type == "X" else corr.z
        # residual error on the outer code, then final ideal decode
        total = {
            "X": ex[self.outer_qubits] ^ applied["X"],
            "Z": ez[self.outer_qubits] ^ applied["Z"],
        }
        flags = self._flags(logical, total)
        for corr_type in ("X", "Z"):
            syn = tuple(int(total[corr_type] @ m) % 2 for m in self.plaq_masks)
            total[corr_type] = total[corr_type] ^ _mask(
                self.ctx.n2, self.decode_table[syn]
            )
        kind = "Z" if logical == "zero" else "X"
        err_side = total["X"] if kind == "Z" else total["Z"]
        failed = bool(int(err_side.sum()) % 2 == 1)
        return _TrialResult(logical, ex, ez, records, repairs, applied, flags, failed)

    def _flags(self, logical: str, total: dict) -> dict:
        flags = {}
        for kind, side in (("Z", "X"), ("X", "Z")):
            observable = (kind == "Z") == (logical == "zero")
            if observable:
                flags[kind] = -1 if int(total[side].sum()) % 2 else 1
            else:
                flags[kind] = None
        return flags


def _mask(n: int, support) -> np.ndarray:
    out = np.zeros(n, dtype=np.uint8)
    for q in support:
        out[q] ^= 1
    return out


def run_collapse_trials(
    ctx: JumpContext,
    noise: NoiseSpec,
    trials: int,
    trial_offset: int = 0,
    trace_fh=None,
    engine: str = "fast",
) -> TrialStats:
    """Prepare, corrupt, collapse, decode; aggregate exact statistics.

    Logical states alternate between the Z and X basis by trial parity. A
    trial fails when the tracked logical expectation flips after the final
    noiseless decode on the collapsed 2D state. `engine` selects the
    sign-linear fast path or the full tableau pipeline; both produce
    bit-identical trials.
    """
    stats = TrialStats()
    adj = _outer_adjacency(ctx)
    outer_qubits = np.array(ctx.split.outer_vertices)
    fast = CollapseEngine(ctx) if engine == "fast" else None
    base = (
        None
        if fast
        else {"zero": encoded_3d(ctx, "zero"), "plus": encoded_3d(ctx, "plus")}
    )
    for t in range(trial_offset, trial_offset + trials):
        if fast is not None:
            result = fast.run_trial(noise, t)
        else:
            result = _tableau_trial(ctx, base, noise, t)
        for (pair, basis), (delta0, _, _) in result.repairs.items():
            stats.delta0_hist[len(delta0)] += 1
        # Residual class: trials start from a fresh state with trivial flux,
        # so after discarding, the outer deviation from the reference encoded
        # state is exactly the injected outer error times the applied
        # correction (a pure inner error never reaches the outer block).
        res = {}
        for corr_type in ("X", "Z"):
            injected = result.ex if corr_type == "X" else result.ez
            vec = injected[outer_qubits] ^ result.applied[corr_type]
            res[corr_type] = _class_min_support(ctx, vec)
        combined = np.flatnonzero(res["X"] | res["Z"])
        stats.residual_weight_hist[int(res["X"].sum() + res["Z"].sum())] += 1
        stats.max_residual_component = max(
            stats.max_residual_component, _max_component(combined.tolist(), adj)
        )
        stats.trials += 1
        if result.failed:
            kind = "Z" if result.logical == "zero" else "X"
            stats.failures[kind] += 1
        if trace_fh is not None:
            trace_fh.write(_trace_line(noise, t, result) + "\n")
    return stats


def _tableau_trial(ctx, base, noise, t) -> _TrialResult:
    rng = trial_rng(noise.seed, t)
    logical = "zero" if t % 2 == 0 else "plus"
    kind = "Z" if logical == "zero" else "X"
    state = base[logical].copy()
    ex, ez = sample_qubit_noise(noise.p_qubit, ctx.n3, rng)
    if ex.any() or ez.any():
        state.apply(PauliOperator(ctx.n3, ex, ez))
    out = collapse(ctx, state, noise.q_meas, rng)
    applied = {
        "X": out.applied_correction["X"].x.copy(),
        "Z": out.applied_correction["Z"].z.copy(),
    }
    ideal_decode_2d(ctx, out.residual_state)
    value = out.residual_state.expect(logical_operator(ctx.code2, kind))
    return _TrialResult(
        logical,
        ex,
        ez,
        out.measurement_record,
        out.repair_record,
        applied,
        out.logical_flip_flags,
        bool(value != 1),
    )


def _trace_line(noise: NoiseSpec, t: int, result: _TrialResult) -> str:
    return json.dumps(
        {
            "trial": t,
            "seed": noise.seed,
            "logical": result.logical,
            "injected_x": np.flatnonzero(result.ex).tolist(),
            "injected_z": np.flatnonzero(result.ez).tolist(),
            "records": {
                f"{p}:{b}": {str(k): v for k, v in rec.items()}
                for (p, b), rec in result.records.items()
            },
            "repairs": {
                f"{p}:{b}": [list(d0), list(ge), list(tr)]
                for (p, b), (d0, ge, tr) in result.repairs.items()
            },
            "applied_x": np.flatnonzero(result.applied["X"]).tolist(),
            "applied_z": np.flatnonzero(result.applied["Z"]).tolist(),
            "residual_flags": result.flags,
            "failed": result.failed,
        },
        sort_keys=True,
    )


def exhaustive_weight1_collapse(ctx: JumpContext) -> list:
    """Every single fault (outer/inner qubit Pauli or one measurement flip).

    Returns the list of faults that caused a logical failure; the design
    target is an empty list (distance-3 guarantee).
    """
    failures = []

    def trial(logical, inject=None, flips=None):
        state = encoded_3d(ctx, logical)
        if inject is not None:
            state.apply(inject)
        rng = trial_rng(0, 0)
        out = collapse(ctx, state, 0.0, rng, injected_flips=flips)
        ideal_decode_2d(ctx, out.residual_state)
        kind = "Z" if logical == "zero" else "X"
        return out.residual_state.expect(logical_operator(ctx.code2, kind))

    singles = []
    for q in range(ctx.n3):
        for kind in ("X", "Z", "Y"):
            x = np.zeros(ctx.n3, dtype=np.uint8)
            z = np.zeros(ctx.n3, dtype=np.uint8)
            if kind in ("X", "Y"):
                x[q] = 1
            if kind in ("Z", "Y"):
                z[q] = 1
            singles.append((f"{kind}{q}", PauliOperator(ctx.n3, x, z)))
    for logical in ("zero", "plus"):
        for label, op in singles:
            if trial(logical, inject=op) != 1:
                failures.append(("pauli", logical, label))
        for basis in ("Z", "X"):
            for pair in ctx.pairs:
                for ei in range(len(ctx.duals[pair])):
                    if trial(logical, flips={(pair, basis): {ei}}) != 1:
                        failures.append(("flip", logical, pair, basis, ei))
    return failures


# -- single-shot trials --------------------------------------------------------------


def _decode_3d_cells(code, state, logical_kind):
    """Final noiseless cell-syndrome decode + logical readout for 3D codes."""
    checks = [tuple(vs) for vs, _ in code.colex.cells]
    table_key = ("3d-decode", code.kind)
    table = _SS_DECODE_TABLES.get(table_key)
    if table is None:
        table = min_weight_table(code.n, _syndrome_fn(checks))
        _SS_DECODE_TABLES[table_key] = table
    for meas_basis, corr_basis in (("Z", "X"), ("X", "Z")):
        syn = []
        for chk in checks:
            val = state.expect(PauliOperator.from_support(code.n, meas_basis, chk))
            if val is None:
                raise ValueError("cell syndrome indeterminate")
            syn.append(0 if val == 1 else 1)
        support = table[tuple(syn)]
        state.apply(PauliOperator.from_support(code.n, corr_basis, support))
    return state.expect(logical_operator(code, logical_kind))


_SS_DECODE_TABLES: dict = {}


def run_single_shot_trials(
    code,
    noise: NoiseSpec,
    trials: int,
    trial_offset: int = 0,
    gauge_priority=None,
) -> TrialStats:
    """Single-shot harness: inner codes count stabilizer violations as
    failure (verified noiselessly); tetrahedral codes count logical flips
    after a final ideal decode."""
    stats = TrialStats()
    has_logical = bool(code.L.generators)
    bases = {}
    if has_logical:
        bases["zero"] = encoded_state(code, "zero", gauge_priority)
        bases["plus"] = encoded_state(code, "plus", gauge_priority)
    else:
        bases[None] = encoded_state(code, None, gauge_priority)
    for t in range(trial_offset, trial_offset + trials):
        rng = trial_rng(noise.seed, t)
        logical = (
            ("zero" if t % 2 == 0 else "plus") if has_logical else None
        )
        state = bases[logical].copy()
        ex, ez = sample_qubit_noise(noise.p_qubit, code.n, rng)
        if ex.any() or ez.any():
            state.apply(PauliOperator(code.n, ex, ez))
        for basis in ("Z", "X"):
            state, report = single_shot_ec(state, code, basis, noise.q_meas, rng)
            for pair, size in report.delta0_sizes.items():
                stats.delta0_hist[size] += 1
        stats.trials += 1
        if has_logical:
            kind = "Z" if logical == "zero" else "X"
            value = _decode_3d_cells(code, state, kind)
            if value != 1:
                stats.failures[kind] += 1
        else:
            violated = any(state.expect(g) != 1 for g in code.S.generators)
            if violated:
                stats.failures["stabilizer"] += 1
    return stats


# -- output formats -------------------------------------------------------------------


def stats_csv_rows(points: list[tuple[NoiseSpec, TrialStats]]) -> list[dict]:
    rows = []
    for spec, stats in points:
        k = stats.total_failures
        lo, hi = wilson_interval(k, stats.trials)
        rows.append(
            {
                "p": spec.p_qubit,
                "q": spec.q_meas,
                "seed": spec.seed,
                "trials": stats.trials,
                "failures": k,
                "failure_rate": (k / stats.trials) if stats.trials else 0.0,
                "wilson_low_3sigma": lo,
                "wilson_high_3sigma": hi,
            }
        )
    return rows


def write_csv(path, rows: list[dict]) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
