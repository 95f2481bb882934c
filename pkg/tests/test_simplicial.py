import random
from collections import Counter
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobiset.jacobi import BILINEAR, CriticalEdgeRecord
from jacobiset.simplicial import (
    CollapseError,
    CollapseTrace,
    SimplicialComplex,
    betti01,
    collapse_odd_simplex,
    contract_edge,
    elementary_collapse,
    eulerian_number,
    gf2_rank,
    is_dominated,
    is_free_face,
    link,
    nerve,
    nerve_of_critical_edges,
    odd_collapse_choices,
    star,
    strong_collapse,
)

fs = frozenset


def K_(*simplices):
    return SimplicialComplex(simplices)


def random_complex(rng, n_vertices, n_max, max_size=4):
    K = SimplicialComplex((v,) for v in range(n_vertices))
    for _ in range(n_max):
        k = rng.randint(1, min(max_size, n_vertices))
        K.add(rng.sample(range(n_vertices), k))
    return K


complexes = st.builds(
    lambda seed, nv, nm: random_complex(random.Random(seed), nv, nm),
    st.integers(0, 2**32), st.integers(1, 9), st.integers(0, 8),
)


# -- container ---------------------------------------------------------------


def test_closure_and_maximal():
    K = K_((1, 2, 3), (3, 4))
    assert len(K) == 7 + 2
    assert K.is_closed()
    assert K.maximal_simplices() == [fs({3, 4}), fs({1, 2, 3})]
    assert K.dim == 2
    assert K.vertices == [1, 2, 3, 4]
    assert K.degree(3) == 3
    with pytest.raises(ValueError):
        K.add(())


def test_text_round_trip():
    K = K_((1, 2, 3), (3, 4), (7,))
    text = K.to_text()
    assert text.splitlines()[:3] == ["1", "2", "3"]
    assert SimplicialComplex.from_text(text) == K
    assert SimplicialComplex.from_text(text).to_text() == text


def test_from_graph():
    K = SimplicialComplex.from_graph(4, [(0, 1), (1, 2), (3, 3)])
    assert K.vertices == [0, 1, 2, 3]
    assert K.edges() == [(0, 1), (1, 2)]


# -- star and link -------------------------------------------------------------


def test_link_of_vertex_in_triangle():
    K = K_((1, 2, 3))
    assert link(K, (1,)) == K_((2, 3))
    assert link(K, (1, 2)) == K_((3,))
    assert star(K, (1,)) == K


def test_link_of_bowtie_vertex():
    K = K_((1, 2, 3), (1, 4, 5))
    L = link(K, (1,))
    assert L == K_((2, 3), (4, 5))
    assert betti01(L) == (2, 0)
    assert star(K, (2, 3)) == K_((1, 2, 3))


def test_star_link_missing():
    with pytest.raises(KeyError):
        link(K_((1, 2)), (1, 3))
    with pytest.raises(KeyError):
        star(K_((1, 2)), (9,))


@settings(max_examples=60, deadline=None)
@given(complexes)
def test_star_and_link_are_subcomplexes(K):
    for v in K.vertices:
        S, L = star(K, (v,)), link(K, (v,))
        assert S.is_closed() and L.is_closed()
        assert L.simplices <= S.simplices <= K.simplices
        assert all(v not in t for t in L)


# -- free faces and elementary collapses ------------------------------------


def test_free_faces():
    tri = K_((1, 2, 3))
    assert is_free_face(tri, (2, 3)) == fs({1, 2, 3})
    two = K_((1, 2, 3), (2, 3, 4))
    assert is_free_face(two, (2, 3)) is None
    assert is_free_face(K_((1, 2)), (1, 2)) is None
    assert is_free_face(K_((1, 2)), (1,)) == fs({1, 2})


def test_elementary_collapse_triangle():
    K = K_((1, 2, 3))
    L = elementary_collapse(K, (2, 3), (1, 2, 3))
    assert L == K_((1, 2), (1, 3))
    assert L.euler_characteristic() == K.euler_characteristic() == 1
    assert len(K) == 7  # not mutated
    with pytest.raises(CollapseError):
        elementary_collapse(K_((1, 2, 3), (2, 3, 4)), (2, 3), (1, 2, 3))


def test_tetrahedron_four_collapses():
    # the minimal trace from the solid tetrahedron down to a 1-complex
    K = K_((1, 2, 3, 4))
    moves = [((1, 2, 3), (1, 2, 3, 4)), ((1, 2), (1, 2, 4)), ((1, 3), (1, 3, 4)), ((2, 3), (2, 3, 4))]
    for s, s2 in moves:
        K = elementary_collapse(K, s, s2)
    assert K.dim == 1
    assert K == K_((1, 4), (2, 4), (3, 4))
    assert len(moves) == eulerian_number(3, 1)


@settings(max_examples=60, deadline=None)
@given(complexes, st.integers(0, 2**32))
def test_collapses_preserve_homology(K, seed):
    rng = random.Random(seed)
    b, chi = betti01(K), K.euler_characteristic()
    trace = CollapseTrace()
    L = K
    for _ in range(10):
        free = [(s, c) for s in L for c in [is_free_face(L, s)] if c is not None]
        if not free:
            break
        s, c = rng.choice(free)
        L = elementary_collapse(L, s, c)
        trace.moves.append(("simplicial", s, c))
        assert L.is_closed()
        assert L.euler_characteristic() == chi
        assert betti01(L) == b
    assert trace.replay(K) == L


# -- odd simplex collapse ----------------------------------------------------


def test_collapse_odd_simplex_star():
    K = K_((1, 2, 4, 5), (5, 6), (1, 7))
    L, trace = collapse_odd_simplex(K, (1, 2, 4, 5), (1, 2, 4))
    assert L.dim == 1
    assert L.edges() == [(1, 5), (1, 7), (2, 5), (4, 5), (5, 6)]
    assert len(trace) == eulerian_number(3, 1) == 4
    assert trace.replay(K) == L


def test_odd_collapse_choices_distinct():
    S = (1, 2, 4, 5)
    outcomes = set()
    for face in odd_collapse_choices(S):
        L, _ = collapse_odd_simplex(K_(S), S, face)
        (apex,) = set(S) - face
        assert all(apex in e for e in L.edges())
        outcomes.add(L.simplices)
    assert len(outcomes) == 4


def even_environment(n):
    """An ``n``-simplex on ``0..n`` whose vertices are paired by outside paths.

    Every vertex then has even degree before collapsing.
    """
    S = tuple(range(n + 1))
    K = K_(S)
    for k in range(0, n + 1, 2):
        mid = 100 + k
        K.add((k, mid))
        K.add((k + 1, mid))
    return K, S


@pytest.mark.parametrize("n", [3, 5, 7])
def test_odd_collapse_parity(n):
    K, S = even_environment(n)
    assert all(K.degree(v) % 2 == 0 for v in K.vertices)
    for face in odd_collapse_choices(S):
        L, trace = collapse_odd_simplex(K, S, face)
        assert L.dim == 1
        assert all(L.degree(v) % 2 == 0 for v in L.vertices)
        (apex,) = set(S) - face
        assert L.degree(apex) == n + 1
        assert all(L.degree(v) == 2 for v in face)
        assert len(trace) == 2**n - n - 1
        assert betti01(L) == betti01(K)


def test_collapse_odd_simplex_errors():
    with pytest.raises(CollapseError):
        collapse_odd_simplex(K_((1, 2, 3)), (1, 2, 3), (1, 2))  # even dimension
    with pytest.raises(CollapseError):
        collapse_odd_simplex(K_((1, 2)), (1, 2), (1,))  # n = 1
    with pytest.raises(CollapseError):
        collapse_odd_simplex(K_((1, 2, 3, 4, 5)), (1, 2, 3, 4), (1, 2, 3))  # not maximal
    with pytest.raises(CollapseError):
        collapse_odd_simplex(K_((1, 2, 3, 4), (3, 4, 9)), (1, 2, 3, 4), (1, 2, 3))  # shared edge
    with pytest.raises(CollapseError):
        collapse_odd_simplex(K_((1, 2, 3, 4)), (1, 2, 3, 4), (1, 2))  # not a facet


# -- Eulerian numbers ----------------------------------------------------------


def test_eulerian_numbers():
    assert eulerian_number(3, 1) == 4
    assert eulerian_number(1, 0) == 1
    assert [eulerian_number(n, 0) for n in range(1, 7)] == [1] * 6
    assert [eulerian_number(4, m) for m in range(4)] == [1, 11, 11, 1]
    for n in range(1, 9):
        assert eulerian_number(n, 1) == 2**n - n - 1
    with pytest.raises(ValueError):
        eulerian_number(0, 0)


# -- strong collapse and nerves ---------------------------------------------


def test_is_dominated_examples():
    assert is_dominated(K_((1, 2, 3)), 1) == 2
    cycle = K_((0, 1), (1, 2), (2, 3), (3, 0))
    assert all(is_dominated(cycle, v) is None for v in cycle.vertices)
    base = K_((1, 2), (2, 3), (3, 4), (5,))
    cone = K_(*[tuple(s) + (0,) for s in base.maximal_simplices()])
    assert all(is_dominated(cone, v) == 0 for v in base.vertices)
    with pytest.raises(KeyError):
        is_dominated(cycle, 9)


@pytest.mark.parametrize("d", [0, 1, 2, 3, 5])
def test_strong_collapse_simplex(d):
    core, trace = strong_collapse(K_(tuple(range(d + 1))))
    assert len(core.vertices) == 1 and len(core) == 1
    assert len(trace) == d


def test_strong_collapse_cycle_unchanged():
    cycle = K_((0, 1), (1, 2), (2, 3), (3, 0))
    core, trace = strong_collapse(cycle)
    assert core == cycle and len(trace) == 0


def test_strong_collapse_three_moves():
    K = K_((0, 1), (1, 2), (2, 3), (3, 0), (0, 1, 4), (2, 5), (3, 6))
    core, trace = strong_collapse(K)
    assert trace.moves == [("strong", 4, 0), ("strong", 5, 2), ("strong", 6, 3)]
    assert core == K_((0, 1), (1, 2), (2, 3), (3, 0))
    assert trace.replay(K) == core


@settings(max_examples=60, deadline=None)
@given(complexes)
def test_strong_collapse_fixed_point(K):
    core, trace = strong_collapse(K)
    assert all(is_dominated(core, v) is None for v in core.vertices)
    assert trace.replay(K) == core
    assert betti01(core) == betti01(K)


def test_nerve_examples():
    assert nerve(K_((1, 2, 3), (3, 4, 5))) == K_((0, 1))
    assert nerve(K_((1, 2), (3, 4))) == K_((0,), (1,))
    N = nerve(K_((0, 1), (0, 2), (0, 3), (0, 4)))
    assert N == K_((0, 1, 2, 3))


def test_nerve_pairwise_single_vertex_intersections():
    # maximal simplices meeting in at most one vertex: nerve 1-skeleton = intersection graph
    K = K_((0, 1, 2), (2, 3), (3, 4, 5), (5, 0), (6, 7))
    maximal = K.maximal_simplices()
    expected = {(i, j) for i, j in combinations(range(len(maximal)), 2) if maximal[i] & maximal[j]}
    assert set(nerve(K).edges()) == expected


def record(e, a, b):
    return CriticalEdgeRecord(e, a, b, (0.0, 0.0), 0.5, BILINEAR)


def test_nerve_of_critical_edges():
    chain = [record(0, 1, 2), record(1, 2, 3)]
    assert nerve_of_critical_edges(chain) == K_((0, 1))
    hub = [record(k, 0, v) for k, v in enumerate((1, 2, 3, 4))]
    N = nerve_of_critical_edges(hub)
    assert N == K_((0, 1, 2, 3))
    assert len(N.edges()) == 6
    assert nerve_of_critical_edges(hub, max_dim=2).dim == 2
    assert betti01(nerve_of_critical_edges(hub, max_dim=2)) == (1, 0)


def test_contract_edge_path():
    L, held = contract_edge(K_((0, 1), (1, 2)), 0, 1)
    assert held and L == K_((0, 2))
    assert betti01(L) == (1, 0)


def test_contract_edge_triangle_graph():
    K = K_((0, 1), (1, 2), (0, 2))
    L, held = contract_edge(K, 0, 1)
    assert not held
    assert betti01(K) == (1, 1) and betti01(L) == (1, 0)


def test_contract_spoke_of_star():
    K = K_((0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (5, 2))
    L, held = contract_edge(K, 0, 1)
    assert held
    assert betti01(L) == betti01(K) == (1, 1)
    with pytest.raises(KeyError):
        contract_edge(K, 1, 2)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 9), st.integers(1, 14))
def test_contract_with_link_condition_preserves_betti(seed, nv, ne):
    rng = random.Random(seed)
    K = SimplicialComplex.from_graph(nv, [tuple(rng.sample(range(nv), 2)) for _ in range(ne)])
    for a, b in K.edges():
        L, held = contract_edge(K, a, b)
        if held:
            assert betti01(L) == betti01(K)


# -- homology ------------------------------------------------------------------


def test_betti_examples():
    K4 = K_(*combinations(range(4), 2))
    assert betti01(K4) == (1, 3)
    assert betti01(K_((0, 1, 2, 3))) == (1, 0)
    assert betti01(K_((0, 1), (0, 2), (0, 3), (0, 4))) == (1, 0)
    assert betti01(K_((0,), (1,))) == (2, 0)
    # hollow octahedron: a sphere
    octa = K_(*[(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)])
    assert betti01(octa) == (1, 0)
    # triangulated torus (7 vertices)
    torus = K_(*[(i % 7, (i + 1) % 7, (i + 3) % 7) for i in range(7)], *[(i % 7, (i + 2) % 7, (i + 3) % 7) for i in range(7)])
    assert betti01(torus) == (1, 2)


def test_gf2_rank():
    assert gf2_rank([]) == 0
    assert gf2_rank([0b011, 0b110, 0b101]) == 2
    assert gf2_rank([1, 2, 4, 8]) == 4
    assert gf2_rank([0b1111, 0b1111]) == 1


@settings(max_examples=60, deadline=None)
@given(complexes)
def test_euler_relation(K):
    b0, b1 = betti01(K)
    if K.dim <= 1:
        assert b0 - b1 == K.euler_characteristic()


def stabilized_double_nerve(K, limit=20):
    cur = K
    for _ in range(limit):
        nxt = nerve(nerve(cur))
        if len(nxt.vertices) == len(cur.vertices):
            return nxt
        cur = nxt
    raise AssertionError("nerve iteration did not stabilize")


def fingerprint(K):
    return len(K.vertices), sorted(Counter(K.degree(v) for v in K.vertices).items()), betti01(K)


@pytest.mark.parametrize("seed", range(40))
def test_core_matches_stabilized_double_nerve(seed):
    rng = random.Random(seed)
    K = random_complex(rng, rng.randint(3, 10), rng.randint(2, 8), max_size=3)
    core, _ = strong_collapse(K)
    assert fingerprint(core) == fingerprint(stabilized_double_nerve(K))
