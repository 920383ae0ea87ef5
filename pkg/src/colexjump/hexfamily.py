"""Procedural triangular 2-colexes on the hexagonal lattice (distances 3,5,7).

Built through the dual picture. Dual vertices are plaquettes, carrying one of
three colors; dual faces are qubits, one of each color per face. For a
triangular patch of code the dual is:

  * a pinwheel-shaped patch of the triangular lattice in axial coordinates
    (a, b), colored by (a - b) mod 3, closed under the 120-degree rotation
    rho(a, b) = (2 - a - b, a);
  * each of the three staircase sides alternates two colors, so one virtual
    vertex of the absent color closes that side with a fan of faces (the
    virtual vertex is the single removed plaquette behind each border);
  * one extra face per corner joins the corner point and its two virtuals.

Qubits are the dual faces; a code edge joins two faces sharing a dual edge
and takes the color complementary to that edge's endpoint colors; the
plaquette of a dual point collects all faces around it. Distance d = 2m+3
uses the staircase with 2m+1 steps starting at (m+1, 1).
"""

from __future__ import annotations

from .colex import COLORS, Colex, color_set


def _rho(p):
    a, b = p
    return (2 - a - b, a)


def _color(p) -> str:
    return "rgb"[(p[0] - p[1]) % 3]


def _staircase(m: int):
    """Open side from (m+1, 1): 2m+1 alternating steps (0,-1)/(-1,0)."""
    pts = [(m + 1, 1)]
    for i in range(2 * m + 1):
        a, b = pts[-1]
        pts.append((a, b - 1) if i % 2 == 0 else (a - 1, b))
    return pts


def _interior_points(cycle):
    """Lattice points strictly inside the boundary cycle (axial coords).

    Containment is affine-invariant, so ray casting can run directly on the
    (a, b) plane even though the embedding is sheared.
    """
    on_cycle = set(cycle)
    amin = min(a for a, _ in cycle)
    amax = max(a for a, _ in cycle)
    bmin = min(b for _, b in cycle)
    bmax = max(b for _, b in cycle)
    edges = list(zip(cycle, cycle[1:] + cycle[:1]))
    inside = []
    for a0 in range(amin, amax + 1):
        for b0 in range(bmin, bmax + 1):
            if (a0, b0) in on_cycle:
                continue
            crossings = 0
            for (a1, b1), (a2, b2) in edges:
                if (b1 > b0) != (b2 > b0):
                    a_int = a1 + (b0 - b1) * (a2 - a1) / (b2 - b1)
                    if a_int > a0:
                        crossings += 1
            if crossings % 2 == 1:
                inside.append((a0, b0))
    return inside


def triangular_hex_colex(distance: int) -> Colex:
    """Triangular color code patch of the 6.6.6 family with the given distance."""
    if distance < 3 or distance % 2 == 0:
        raise ValueError(f"distance must be odd and >= 3, got {distance}")
    m = (distance - 3) // 2
    side = _staircase(m)
    rho_side = [_rho(p) for p in side]
    rho2_side = [_rho(p) for p in rho_side]
    # side runs C0 -> rho^2(C0), so the closed walk chains powers 0, 2, 1
    sides = [side, rho2_side, rho_side]
    cycle: list[tuple[int, int]] = []
    for segment in sides:
        cycle.extend(segment[:-1])
    patch = set(cycle) | set(_interior_points(cycle))

    # three virtual vertices: one per side, colored by the side's absent color
    virtuals = {}
    for k, segment in enumerate(sides):
        present = {_color(p) for p in segment}
        absent = set("rgb") - present
        if len(absent) != 1:
            raise AssertionError(f"side {k} colors {present} do not leave one absent")
        virtuals[k] = ("virtual", k, next(iter(absent)))

    def dual_color(v) -> str:
        return v[2] if isinstance(v, tuple) and v and v[0] == "virtual" else _color(v)

    # dual faces = qubits
    faces: list[frozenset] = []
    for p in sorted(patch):
        a, b = p
        up = [(a, b), (a + 1, b), (a, b + 1)]
        down = [(a, b), (a + 1, b), (a + 1, b - 1)]
        for tri in (up, down):
            if all(q in patch for q in tri) and frozenset(tri) not in map(frozenset, faces):
                faces.append(frozenset(tri))
    for k in range(3):
        v = virtuals[k]
        seg = sides[k]
        for p, q in zip(seg, seg[1:]):
            faces.append(frozenset([p, q, v]))
    # corner faces: sides[k] starts where sides[(k-1)%3] ends
    for k in range(3):
        corner = sides[k][0]
        faces.append(frozenset([corner, virtuals[k], virtuals[(k - 1) % 3]]))

    for f in faces:
        cols = {dual_color(v) for v in f}
        if len(cols) != 3:
            raise AssertionError(f"dual face {sorted(map(str, f))} has colors {cols}")

    # primal reconstruction
    qubit_of = {f: i for i, f in enumerate(faces)}
    edges = []
    seen_pairs: dict[frozenset, list[frozenset]] = {}
    for f in faces:
        for v in f:
            for w in f:
                if str(v) < str(w):
                    seen_pairs.setdefault(frozenset([v, w]), []).append(f)
    for pair_vs, shared in seen_pairs.items():
        if len(shared) == 2:
            cols = {dual_color(v) for v in pair_vs}
            edge_color = next(iter(set("rgb") - cols))
            a, b = qubit_of[shared[0]], qubit_of[shared[1]]
            edges.append((min(a, b), max(a, b), edge_color))
        elif len(shared) > 2:
            raise AssertionError("dual edge shared by more than two faces")

    plaquettes = []
    for p in sorted(patch):
        members = sorted(qubit_of[f] for f in faces if p in f)
        pair = color_set(set("rgb") - {_color(p)})
        plaquettes.append((members, pair))

    return Colex(2, len(faces), edges, plaquettes, name=f"tri-hex-d{distance}")


def builtin_colex(name: str) -> Colex:
    """Resolve builtin lattice names: tri7, tetra15, tri-hex-d{3,5,7,...}."""
    from .colex import minimal_colex

    if name == "tri7":
        return minimal_colex(2)
    if name == "tetra15":
        return minimal_colex(3)
    if name.startswith("tri-hex-d"):
        return triangular_hex_colex(int(name[len("tri-hex-d") :]))
    raise ValueError(f"unknown builtin colex {name!r}")
