"""Lattices and the codes they define.

Builds the bundled minimal colexes and the hexagonal triangular family,
inspects their boundary structure, and derives code parameters.
"""

import colexjump as cj
from colexjump.boundary import boundary_structure
from colexjump.codes import build_2d, build_3d, code_parameters
from colexjump.hexfamily import triangular_hex_colex

print("== minimal lattices ==")
tri7 = cj.minimal_colex(2)
tetra15 = cj.minimal_colex(3)
for colex in (tri7, tetra15):
    report = cj.validate(colex)
    print(f"{colex!r}  valid={report.ok}  hash={colex.content_hash()[:12]}")

print("\n== boundary structure of the tetrahedron ==")
bs = boundary_structure(tetra15)
for region in bs.regions:
    print(f"  region {region.colors}: {region.classification}, "
          f"{len(region.vertices)} vertices, borders {region.borders}")
print(f"  corners: {[(c.color, c.vertex) for c in bs.corners]}")
print(f"  every border odd: {all(b.odd for b in bs.borders)}")

print("\n== code parameters ==")
print("tri7    ->", code_parameters(build_2d(tri7)))
print("tetra15 ->", code_parameters(build_3d(tetra15)))

print("\n== hexagonal triangular family ==")
for d in (3, 5, 7):
    colex = triangular_hex_colex(d)
    n, k, dist = code_parameters(build_2d(colex))
    weights = sorted(len(vs) for vs, _ in colex.plaquettes)
    print(f"d={d}: [[{n},{k},{dist}]], plaquette weights "
          f"{weights.count(4)}x4 + {weights.count(6)}x6")

print("\n== the triangle's plaquettes are the classical Hamming checks ==")
print(sorted(tuple(vs) for vs, _ in tri7.plaquettes))
