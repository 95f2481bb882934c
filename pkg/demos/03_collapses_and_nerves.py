"""Small experiments with collapses, strong collapses and nerves.

    python3 demos/03_collapses_and_nerves.py
"""

from jacobiset.simplicial import (
    SimplicialComplex,
    betti01,
    collapse_odd_simplex,
    eulerian_number,
    nerve,
    odd_collapse_choices,
    strong_collapse,
)

# A degree-4 hub of critical edges becomes a tetrahedron in the nerve.
# Collapsing one of its triangles leaves a star into the opposite vertex.
tet = SimplicialComplex([(1, 2, 4, 5)])
for face in odd_collapse_choices((1, 2, 4, 5)):
    L, trace = collapse_odd_simplex(tet, (1, 2, 4, 5), face)
    print(f"face {sorted(face)}: edges {L.edges()}  ({len(trace)} moves)")
print("A(3,1) =", eulerian_number(3, 1))

# A 5-simplex needs A(5,1) moves.
L, trace = collapse_odd_simplex(SimplicialComplex([range(6)]), range(6), range(5))
print(f"5-simplex: {len(trace)} moves, A(5,1) = {eulerian_number(5, 1)}, degrees",
      [L.degree(v) for v in L.vertices])

# Strong collapse of a square with a flap and two whiskers.
K = SimplicialComplex([(0, 1), (1, 2), (2, 3), (3, 0), (0, 1, 4), (2, 5), (3, 6)])
core, trace = strong_collapse(K)
print("strong collapse moves:", trace.moves)
print("core:", core.edges(), "betti", betti01(core))

# The core is reached by iterating the double nerve, and one round is not
# always enough: here N^2 still has a dominated vertex.
K = SimplicialComplex([(5, 6), (0, 4, 8), (1, 2, 4), (2, 3, 9), (3, 7, 9), (4, 6, 7), (0, 2, 4, 9), (1, 4, 5, 7)])
core, _ = strong_collapse(K)
print(f"core of K: {len(core.vertices)} vertices")
cur = K
for step in range(1, 4):
    cur = nerve(nerve(cur))
    print(f"N^{2 * step}(K): {len(cur.vertices)} vertices, degrees {sorted(cur.degree(v) for v in cur.vertices)}")
print(f"core degrees {sorted(core.degree(v) for v in core.vertices)}")
