"""Finite abstract simplicial complexes: collapses, nerves, edge contraction, homology.

Simplices are frozensets of integer vertex labels. A complex always stores
every face of every member (downward closure is maintained eagerly), which
keeps free-face and domination queries to plain set operations. Ties are
broken by the smallest label so collapse traces are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

__all__ = [
    "SimplicialComplex",
    "CollapseTrace",
    "CollapseError",
    "star",
    "link",
    "is_free_face",
    "elementary_collapse",
    "collapse_odd_simplex",
    "odd_collapse_choices",
    "eulerian_number",
    "is_dominated",
    "strong_collapse",
    "nerve",
    "contract_edge",
    "betti01",
    "gf2_rank",
    "nerve_of_critical_edges",
    "UnionFind",
]


class CollapseError(ValueError):
    pass


def _key(s):
    return (len(s), sorted(s))


class SimplicialComplex:
    """A downward-closed set of simplices over integer labels.

    >>> K = SimplicialComplex([(1, 2, 3)])
    >>> len(K)
    7
    """

    def __init__(self, simplices=()):
        self._simplices: set[frozenset] = set()
        self._maximal = None
        for s in simplices:
            self.add(s)

    # -- construction ------------------------------------------------------

    def add(self, simplex):
        """Insert ``simplex`` together with all of its faces."""
        s = frozenset(simplex)
        if not s:
            raise ValueError("the empty set is not a simplex")
        if s in self._simplices:
            return
        self._maximal = None
        items = sorted(s)
        for k in range(1, len(items) + 1):
            for face in combinations(items, k):
                self._simplices.add(frozenset(face))

    def discard(self, simplex):
        """Remove one simplex; the caller is responsible for keeping closure."""
        self._simplices.discard(frozenset(simplex))
        self._maximal = None

    def remove_vertex(self, v):
        """Delete ``v`` and every simplex containing it."""
        self._simplices = {s for s in self._simplices if v not in s}
        self._maximal = None

    def copy(self):
        K = SimplicialComplex()
        K._simplices = set(self._simplices)
        return K

    @classmethod
    def from_graph(cls, n_nodes, segments):
        """1-complex on nodes ``0..n_nodes-1`` with the given edges."""
        K = cls()
        K._simplices = {frozenset((v,)) for v in range(n_nodes)}
        K._simplices.update(frozenset(e) for e in segments if e[0] != e[1])
        return K

    # -- queries -----------------------------------------------------------

    def __contains__(self, simplex):
        return frozenset(simplex) in self._simplices

    def __iter__(self):
        return iter(sorted(self._simplices, key=_key))

    def __len__(self):
        return len(self._simplices)

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._simplices == other._simplices

    def __repr__(self):
        return f"SimplicialComplex(maximal={[sorted(m) for m in self.maximal_simplices()]})"

    @property
    def simplices(self):
        return frozenset(self._simplices)

    @property
    def vertices(self):
        return sorted(next(iter(s)) for s in self._simplices if len(s) == 1)

    @property
    def dim(self):
        return max((len(s) for s in self._simplices), default=0) - 1

    def faces(self, k):
        """All ``k``-simplices, sorted."""
        return sorted((s for s in self._simplices if len(s) == k + 1), key=sorted)

    def edges(self):
        return [tuple(sorted(e)) for e in self.faces(1)]

    def degree(self, v):
        return sum(1 for s in self._simplices if len(s) == 2 and v in s)

    def maximal_simplices(self):
        """Simplices that are not a proper face of another one, sorted."""
        if self._maximal is None:
            by_size = sorted(self._simplices, key=len, reverse=True)
            maximal = []
            for s in by_size:
                if not any(s < m for m in maximal):
                    maximal.append(s)
            self._maximal = sorted(maximal, key=_key)
        return list(self._maximal)

    def cofaces(self, simplex):
        s = frozenset(simplex)
        return [t for t in self._simplices if s < t]

    def euler_characteristic(self):
        return sum((-1) ** (len(s) - 1) for s in self._simplices)

    def is_closed(self):
        return all(
            frozenset(face) in self._simplices
            for s in self._simplices
            for k in range(1, len(s))
            for face in combinations(sorted(s), k)
        )

    def to_text(self):
        """One simplex per line, vertices space separated, in sorted order."""
        return "".join(" ".join(map(str, sorted(s))) + "\n" for s in self)

    @classmethod
    def from_text(cls, text):
        return cls(tuple(int(v) for v in line.split()) for line in text.splitlines() if line.strip())


# --------------------------------------------------------------------------
# Star, link, collapses


def _require(K, sigma):
    s = frozenset(sigma)
    if s not in K:
        raise KeyError(f"{sorted(s)} is not a simplex of the complex")
    return s


def star(K, sigma):
    """Closed star: every ``tau`` with ``tau | sigma`` in ``K``."""
    s = _require(K, sigma)
    out = SimplicialComplex()
    out._simplices = {t for t in K.simplices if (t | s) in K}
    return out


def link(K, sigma):
    """Simplices of the closed star that are disjoint from ``sigma``."""
    s = _require(K, sigma)
    out = SimplicialComplex()
    out._simplices = {t for t in K.simplices if not (t & s) and (t | s) in K}
    return out


def is_free_face(K, S):
    """The unique proper coface of ``S`` if there is exactly one, else ``None``."""
    s = _require(K, S)
    cof = K.cofaces(s)
    if len(cof) == 1:
        return cof[0]
    return None


@dataclass
class CollapseTrace:
    """Ordered elementary moves.

    Each move is ``("simplicial", S, S')`` (free face ``S`` of ``S'``) or
    ``("strong", a, a')`` (vertex ``a`` dominated by ``a'``).
    """

    moves: list = field(default_factory=list)

    def __len__(self):
        return len(self.moves)

    def replay(self, K):
        """Apply the moves to a copy of ``K``, checking each one is legal."""
        K = K.copy()
        for kind, x, y in self.moves:
            if kind == "simplicial":
                K = elementary_collapse(K, x, y, inplace=True)
            elif kind == "strong":
                if is_dominated(K, x) is None:
                    raise CollapseError(f"vertex {x} is not dominated during replay")
                K.remove_vertex(x)
            else:
                raise ValueError(f"unknown move kind {kind!r}")
        return K


def elementary_collapse(K, S, S2, inplace=False):
    """Remove the free face ``S`` together with its unique coface ``S2``."""
    s, s2 = frozenset(S), frozenset(S2)
    if s not in K or is_free_face(K, s) != s2:
        raise CollapseError(f"{sorted(s)} is not a free face of {sorted(s2)}")
    out = K if inplace else K.copy()
    out.discard(s2)
    out.discard(s)
    return out


def odd_collapse_choices(S):
    """Every codimension-one face of ``S``, in sorted order."""
    items = sorted(S)
    return [frozenset(c) for c in combinations(items, len(items) - 1)]


def collapse_odd_simplex(K, S, face):
    """Collapse the odd-dimensional simplex ``S`` onto a star.

    All edges of the codimension-one face ``face`` are removed; what remains
    of ``S`` is the star of edges from the apex ``S \\ face`` to each vertex
    of ``face``. The moves pair every face ``tau`` of ``face`` (with at
    least two vertices) with ``tau + apex``, largest ``tau`` first.

    Returns
    -------
    (SimplicialComplex, CollapseTrace)

    Raises
    ------
    CollapseError
        If ``S`` is even-dimensional or a single edge, is not maximal, shares
        an edge with another maximal simplex, or ``face`` is not a facet of it.
    """
    S = frozenset(S)
    face = frozenset(face)
    n = len(S) - 1
    if n <= 1 or n % 2 == 0:
        raise CollapseError(f"need an odd-dimensional simplex of dimension > 1, got {n}")
    if S not in K.maximal_simplices():
        raise CollapseError(f"{sorted(S)} is not a maximal simplex")
    if not (face < S and len(face) == n):
        raise CollapseError(f"{sorted(face)} is not a facet of {sorted(S)}")
    for m in K.maximal_simplices():
        if m != S and len(m & S) >= 2:
            raise CollapseError(f"{sorted(S)} shares an edge with {sorted(m)}")

    (apex,) = S - face
    taus = [frozenset(c) for k in range(n, 1, -1) for c in combinations(sorted(face), k)]
    out = K.copy()
    trace = CollapseTrace()
    for tau in taus:
        coface = tau | {apex}
        elementary_collapse(out, tau, coface, inplace=True)
        trace.moves.append(("simplicial", tau, coface))
    return out, trace


def eulerian_number(n, m):
    """``A(n, m) = sum_{k=0}^{m+1} (-1)^k C(n+1, k) (m+1-k)^n`` in exact integers."""
    if n < 1 or m < 0:
        raise ValueError(f"need n >= 1 and m >= 0, got n={n}, m={m}")
    return sum((-1) ** k * math.comb(n + 1, k) * (m + 1 - k) ** n for k in range(m + 2))


# --------------------------------------------------------------------------
# Strong collapse and nerves


def is_dominated(K, a):
    """Smallest ``a'`` contained in every maximal simplex through ``a``, or ``None``."""
    if (a,) not in K:
        raise KeyError(f"{a} is not a vertex of the complex")
    through = [m for m in K.maximal_simplices() if a in m]
    common = frozenset.intersection(*through) - {a}
    return min(common) if common else None


def strong_collapse(K):
    """Delete dominated vertices (smallest label first) until none is left."""
    out = K.copy()
    trace = CollapseTrace()
    while True:
        for a in out.vertices:
            dom = is_dominated(out, a)
            if dom is not None:
                out.remove_vertex(a)
                trace.moves.append(("strong", a, dom))
                break
        else:
            return out, trace


def nerve(K):
    """Nerve of the maximal simplices of ``K``.

    Nerve vertex ``i`` stands for the ``i``-th maximal simplex in sorted
    order; a set of them spans a simplex when their intersection is
    non-empty. Such a set always lies inside the set of maximal simplices
    through a common vertex, so those sets generate the nerve.
    """
    maximal = K.maximal_simplices()
    through = {}
    for i, m in enumerate(maximal):
        for v in m:
            through.setdefault(v, []).append(i)
    return SimplicialComplex(tuple(ids) for _, ids in sorted(through.items()))


def contract_edge(K, a, b):
    """Identify ``b`` with ``a``.

    Returns the contracted complex and whether the link condition
    ``link(a) & link(b) == {}`` held beforehand.
    """
    if (a, b) not in K or a == b:
        raise KeyError(f"({a}, {b}) is not an edge of the complex")
    held = not (link(K, (a,)).simplices & link(K, (b,)).simplices)
    out = SimplicialComplex()
    out._simplices = {frozenset(a if v == b else v for v in s) for s in K.simplices}
    return out, held


# --------------------------------------------------------------------------
# Homology


class UnionFind:
    def __init__(self, items=()):
        self.parent = {x: x for x in items}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True

    def n_components(self):
        return sum(1 for x in self.parent if self.parent[x] == x)


def gf2_rank(rows):
    """Rank over GF(2) of a matrix given as integer bitmask rows."""
    pivots = {}
    for r in rows:
        while r:
            h = r.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = r
                break
            r ^= p
    return len(pivots)


def betti01(K):
    """``(beta0, beta1)`` over GF(2).

    ``beta1 = dim ker d1 - rank d2``; only edges and triangles enter, so any
    higher faces are ignored.
    """
    verts = K.vertices
    edges = K.faces(1)
    uf = UnionFind(verts)
    for e in edges:
        x, y = sorted(e)
        uf.union(x, y)
    b0 = uf.n_components()
    rank_d1 = len(verts) - b0
    edge_index = {e: i for i, e in enumerate(edges)}
    rows = []
    for tri in K.faces(2):
        mask = 0
        for e in combinations(sorted(tri), 2):
            mask |= 1 << edge_index[frozenset(e)]
        rows.append(mask)
    return b0, len(edges) - rank_d1 - gf2_rank(rows)


def nerve_of_critical_edges(records, max_dim=None):
    """Nerve of the closed critical edges.

    Nerve vertex ``k`` is ``records[k]``; every mesh vertex shared by ``d``
    critical edges contributes the full ``(d-1)``-simplex on them. With
    ``max_dim`` set, only faces up to that dimension are stored, which is
    enough for :func:`betti01` when ``max_dim >= 2``.
    """
    hubs = {}
    for k, r in enumerate(records):
        hubs.setdefault(r.a, []).append(k)
        hubs.setdefault(r.b, []).append(k)
    K = SimplicialComplex()
    simplices = {frozenset((k,)) for k in range(len(records))}
    for _, ids in sorted(hubs.items()):
        top = len(ids) if max_dim is None else min(len(ids), max_dim + 1)
        for size in range(2, top + 1):
            simplices.update(frozenset(c) for c in combinations(ids, size))
    K._simplices = simplices
    return K
