"""Flux lines, syndrome repair by matching, and string corrections.

Measuring the inner plaquettes of one color pair yields a set of dual edges
(those reading -1). On an intact encoded state that set has no endpoint at
an inner cell, so any inner endpoints observed after noisy readout must be
paired up: the repair picks a minimum-cardinality edge set with the same
inner endpoints (a minimum T-join, computed as a perfect matching over
shortest dual paths with a shared boundary sink). Ties between equal-size
candidates prefer the edges actually observed, then lowest edge ids, making
replay deterministic.

String corrections translate repaired outer syndromes back into qubit
flips: a syndrome on kk'-plaquettes is cleared by a product of edges of the
third color, chosen with minimal support by exact search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .colex import Colex, color_set
from .codes import CodeTriple
from .pauli import PauliOperator
from .split import FACET, INNER_CELL, OUTER_PLAQUETTE, DualEdge, SplitResult, dual_edges
from .tableau import Tableau


@dataclass(frozen=True)
class FluxConfiguration:
    pair: str
    basis: str  # which operator type was measured, "X" or "Z"
    edges: frozenset  # indices into duals
    duals: tuple

    def inner_endpoints(self) -> tuple[int, ...]:
        count: dict[int, int] = {}
        for i in self.edges:
            for c in self.duals[i].inner_cells():
                count[c] = count.get(c, 0) + 1
        return tuple(sorted(c for c, k in count.items() if k % 2 == 1))

    def outer_endpoints(self) -> tuple[int, ...]:
        count: dict[int, int] = {}
        for i in self.edges:
            for p in self.duals[i].outer_plaquettes():
                count[p] = count.get(p, 0) + 1
        return tuple(sorted(p for p, k in count.items() if k % 2 == 1))

    def replaced(self, edges) -> "FluxConfiguration":
        return FluxConfiguration(self.pair, self.basis, frozenset(edges), self.duals)

    def __xor__(self, other_edges) -> "FluxConfiguration":
        return self.replaced(self.edges ^ frozenset(other_edges))


def plaquette_operator(colex: Colex, pi: int, basis: str) -> PauliOperator:
    return PauliOperator.from_support(
        colex.n_vertices, basis, colex.plaquette_vertices(pi)
    )


def extract_flux(
    state3: Tableau,
    split: SplitResult,
    pair: str,
    basis: str,
    rng: np.random.Generator | None = None,
    duals: tuple | None = None,
) -> FluxConfiguration:
    """Measure the inner pair-plaquettes of one type; -1 readings form the flux."""
    pair = color_set(pair)
    if duals is None:
        duals = tuple(dual_edges(split, pair))
    hot = set()
    for i, dual in enumerate(duals):
        op = plaquette_operator(split.parent, dual.plaquette, basis)
        if state3.measure(op, rng) == -1:
            hot.add(i)
    return FluxConfiguration(pair, basis, frozenset(hot), duals)


# -- dual graph and repair -------------------------------------------------------

_SINK = "sink"


def _dual_adjacency(duals, include_facet: bool):
    """Node -> list of (edge index, neighbor node); boundary merges into sink."""
    adj: dict = {}
    for i, dual in enumerate(duals):
        nodes = []
        for end in dual.endpoints:
            if end.kind == INNER_CELL:
                nodes.append(("cell", end.index))
            elif end.kind == OUTER_PLAQUETTE:
                nodes.append(_SINK)
            elif include_facet:
                nodes.append(_SINK)
            else:
                nodes.append(None)
        a, b = nodes
        for u, v in ((a, b), (b, a)):
            if u is not None and u != _SINK:
                adj.setdefault(u, []).append((i, v))
    return adj


def _best_paths(adj, source, observed):
    """Cheapest path from source to every node.

    Cost of a path is (#edges, -#observed edges, sorted edge tuple); the
    triple ordering realizes the size/likelihood/replay tie break exactly.
    """
    start = ("cell", source)
    best = {start: (0, 0, ())}
    frontier = [start]
    while frontier:
        node = frontier.pop(0)
        if node == _SINK:
            continue
        d, o, path = best[node]
        for edge, nbr in sorted(adj.get(node, [])):
            if nbr is None or edge in path:
                continue
            cand = (
                d + 1,
                o - (1 if edge in observed else 0),
                tuple(sorted(path + (edge,))),
            )
            if nbr not in best or cand < best[nbr]:
                best[nbr] = cand
                frontier.append(nbr)
    return best


def repair_flux(observed: FluxConfiguration, include_facet: bool = True):
    """Minimum-cardinality dual-edge set with the observed inner endpoints.

    Returns (delta0, gamma_eff) with gamma_eff = observed ^ delta0, which by
    construction has no inner endpoints.
    """
    endpoints = observed.inner_endpoints()
    if not endpoints:
        return frozenset(), observed
    duals = observed.duals
    adj = _dual_adjacency(duals, include_facet)
    paths = {c: _best_paths(adj, c, observed.edges) for c in endpoints}

    if len(endpoints) > 10:
        return _repair_large(observed, endpoints, paths)

    best_total = None

    def explore(remaining, acc_cost, acc_edges):
        nonlocal best_total
        if not remaining:
            edges = frozenset()
            for path in acc_edges:
                edges ^= frozenset(path)
            overlap = len(edges & observed.edges)
            cand = (len(edges), -overlap, tuple(sorted(edges)))
            if best_total is None or cand < best_total:
                best_total = cand
            return
        first, rest = remaining[0], remaining[1:]
        options = []
        if _SINK in paths[first]:
            options.append((paths[first][_SINK], rest))
        for i, other in enumerate(rest):
            key = ("cell", other)
            if key in paths[first]:
                options.append((paths[first][key], rest[:i] + rest[i + 1 :]))
        if not options:
            raise ValueError(
                f"inner endpoint {first} cannot be matched "
                f"(facet sink disabled?)"
            )
        for (cost, overlap, path), new_rest in options:
            explore(new_rest, acc_cost + cost, acc_edges + [path])

    explore(list(endpoints), 0, [])
    delta0 = frozenset(best_total[2])
    gamma_eff = observed ^ delta0
    if gamma_eff.inner_endpoints():
        raise AssertionError("repair left inner endpoints behind")
    return delta0, gamma_eff


def _repair_large(observed, endpoints, paths):
    """Blossom matching for many endpoints (beyond bundled-instance scale)."""
    import networkx as nx

    g = nx.Graph()
    for i, a in enumerate(endpoints):
        for b in endpoints[i + 1 :]:
            key = ("cell", b)
            if key in paths[a]:
                cost, _, path = paths[a][key]
                g.add_edge(("e", a), ("e", b), weight=cost, path=path)
        if _SINK in paths[a]:
            cost, _, path = paths[a][_SINK]
            g.add_edge(("e", a), ("s", a), weight=cost, path=path)
        for b in endpoints:
            if b != a:
                g.add_edge(("s", a), ("s", b), weight=0, path=())
    matching = nx.min_weight_matching(g)
    edges = frozenset()
    for u, v in matching:
        edges ^= frozenset(g.edges[u, v]["path"])
    delta0 = edges
    gamma_eff = observed ^ delta0
    if gamma_eff.inner_endpoints():
        raise AssertionError("matching repair left inner endpoints behind")
    return delta0, gamma_eff


# -- string corrections ----------------------------------------------------------


def string_color(pair: str) -> str:
    """Strings of this color move syndrome between plaquettes of the pair."""
    return next(iter(set("rgb") - set(pair)))


def string_correction(
    code2: CodeTriple, syndrome_plaquettes, pair: str, basis: str
) -> PauliOperator:
    """Minimal product of third-color edge operators with the given syndrome.

    `syndrome_plaquettes` lists plaquette ids (of `pair`) whose `basis`-dual
    operators read -1; the correction is of type `basis` itself (an X string
    fixes Z-plaquette syndromes and vice versa).
    """
    pair = color_set(pair)
    colex = code2.colex
    target_ids = [
        pi for pi in range(len(colex.plaquettes)) if colex.plaquette_colors(pi) == pair
    ]
    bad = set(syndrome_plaquettes) - set(target_ids)
    if bad:
        raise ValueError(f"syndrome plaquettes {sorted(bad)} are not {pair}-plaquettes")
    col = string_color(pair)
    edge_ids = [i for i, (a, b, c) in enumerate(colex.edges) if c == col]
    # incidence of each candidate edge on the pair's plaquettes
    rows = []
    for ei in edge_ids:
        a, b, _ = colex.edges[ei]
        rows.append(
            [len({a, b} & set(colex.plaquette_vertices(pi))) % 2 for pi in target_ids]
        )
    target = np.array([1 if pi in set(syndrome_plaquettes) else 0 for pi in target_ids])
    best = None
    for r in range(len(edge_ids) + 1):
        if best is not None:
            break
        for combo in itertools.combinations(range(len(edge_ids)), r):
            acc = np.zeros(len(target_ids), dtype=np.uint8)
            for i in combo:
                acc ^= np.array(rows[i], dtype=np.uint8)
            if np.array_equal(acc, target):
                chosen = tuple(sorted(edge_ids[i] for i in combo))
                if best is None or chosen < best:
                    best = chosen
        if best is not None:
            break
    if best is None:
        raise ValueError("no string operator realizes the requested syndrome")
    support = []
    for ei in best:
        a, b, _ = colex.edges[ei]
        support.extend((a, b))
    return PauliOperator.from_support(code2.n, basis, support)
