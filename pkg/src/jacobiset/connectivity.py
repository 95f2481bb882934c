"""Line-segment drawings of a Jacobi set built from critical-edge records.

Three drawings are supported:

``pl``
    the critical mesh edges themselves;
``nonreduced``
    every pair of Jacobi points whose critical edges share a mesh vertex
    (the 1-skeleton of the nerve of the critical edges);
``reduced``
    per mesh vertex of critical degree ``d``: one segment for ``d == 2``,
    otherwise a synthetic barycenter node joined to each of the ``d`` points.

Segments are stored as sorted node-id pairs in lexicographic order, so the
output only depends on the records.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .simplicial import SimplicialComplex, betti01

__all__ = [
    "PL",
    "NONREDUCED",
    "REDUCED",
    "MODES",
    "JACOBI",
    "BARYCENTER",
    "VERTEX",
    "Node",
    "JacobiGraph",
    "ReductionStats",
    "ParityError",
    "AccountingError",
    "build_vertex_incidence",
    "reduced_connectivity",
    "nonreduced_connectivity",
    "pl_graph",
    "predicted_removed",
    "reduction_stats",
    "build_graphs",
]

PL, NONREDUCED, REDUCED = "pl", "nonreduced", "reduced"
MODES = (PL, NONREDUCED, REDUCED)
JACOBI, BARYCENTER, VERTEX = "jacobi", "barycenter", "vertex"


class ParityError(ValueError):
    def __init__(self, vertex, degree):
        self.vertex = vertex
        self.degree = degree
        super().__init__(
            f"mesh vertex {vertex} has odd critical-edge degree {degree}; "
            "an alignment value is probably exactly zero nearby"
        )


class AccountingError(RuntimeError):
    pass


@dataclass(frozen=True, slots=True)
class Node:
    """A drawing node.

    ``source_edge`` is the critical edge of a Jacobi point; ``source_vertex``
    the mesh vertex of a barycenter (or of a ``pl`` node), with ``valence``
    holding that vertex's critical degree.
    """

    id: int
    x: float
    y: float
    kind: str
    source_edge: int = -1
    source_vertex: int = -1
    valence: int = 0


@dataclass
class JacobiGraph:
    mode: str
    nodes: list[Node] = field(default_factory=list)
    segments: list[tuple[int, int]] = field(default_factory=list)
    segment_source: list[int] = field(default_factory=list)
    zero_length: list[int] = field(default_factory=list)

    @property
    def n_segments(self):
        return len(self.segments)

    def degrees(self):
        deg = [0] * len(self.nodes)
        for i, j in self.segments:
            deg[i] += 1
            deg[j] += 1
        return deg

    def to_complex(self):
        return SimplicialComplex.from_graph(len(self.nodes), self.segments)

    def betti(self):
        return betti01(self.to_complex())

    def point_multiset(self):
        """Sorted coordinates of the Jacobi-point nodes."""
        return sorted((n.x, n.y) for n in self.nodes if n.kind == JACOBI)


def build_vertex_incidence(records):
    """Map each mesh vertex to the indices of its incident records, ascending."""
    inc = {}
    for k, r in enumerate(records):
        inc.setdefault(r.a, []).append(k)
        inc.setdefault(r.b, []).append(k)
    return dict(sorted(inc.items()))


def _jacobi_nodes(records):
    return [
        Node(k, float(r.point[0]), float(r.point[1]), JACOBI, source_edge=int(r.edge))
        for k, r in enumerate(records)
    ]


def _finish(graph, pairs):
    """Canonicalize ``pairs`` (node pair -> source vertex) into ``graph``."""
    for (i, j), src in sorted(pairs.items()):
        graph.segments.append((i, j))
        graph.segment_source.append(src)
        ni, nj = graph.nodes[i], graph.nodes[j]
        if ni.x == nj.x and ni.y == nj.y:
            graph.zero_length.append(len(graph.segments) - 1)
    return graph


def _add(pairs, i, j, src):
    if i == j:
        return
    key = (i, j) if i < j else (j, i)
    if key not in pairs:
        pairs[key] = src


def _records(records):
    # node ids follow edge order
    return sorted(records, key=lambda r: r.edge)


def reduced_connectivity(records, boundary_vertices=None):
    """Reduced drawing: pairs for degree-2 vertices, barycenter stars otherwise.

    Parameters
    ----------
    records : sequence of CriticalEdgeRecord
    boundary_vertices : iterable of int, optional
        Mesh vertices on the domain boundary, where odd degrees are legal.
        A boundary vertex of degree 1 contributes no segment. Without this
        argument every odd degree above 1 raises.

    Raises
    ------
    ParityError
        An interior vertex has odd degree ``d > 1``.
    """
    records = _records(records)
    boundary = set() if boundary_vertices is None else {int(v) for v in boundary_vertices}
    graph = JacobiGraph(REDUCED, _jacobi_nodes(records))
    pairs = {}
    for v, inc in build_vertex_incidence(records).items():
        d = len(inc)
        if d % 2 == 1 and d > 1 and v not in boundary:
            raise ParityError(v, d)
        if d == 1:
            continue
        if d == 2:
            _add(pairs, inc[0], inc[1], v)
            continue
        bx = math.fsum(graph.nodes[k].x for k in inc) / d
        by = math.fsum(graph.nodes[k].y for k in inc) / d
        c = len(graph.nodes)
        graph.nodes.append(Node(c, bx, by, BARYCENTER, source_vertex=v, valence=d))
        for k in inc:
            _add(pairs, k, c, v)
    return _finish(graph, pairs)


def nonreduced_connectivity(records):
    """All ``C(d, 2)`` pairs of Jacobi points around every mesh vertex."""
    records = _records(records)
    graph = JacobiGraph(NONREDUCED, _jacobi_nodes(records))
    pairs = {}
    for v, inc in build_vertex_incidence(records).items():
        for x in range(len(inc)):
            for y in range(x + 1, len(inc)):
                _add(pairs, inc[x], inc[y], v)
    return _finish(graph, pairs)


def pl_graph(records, t):
    """The critical edges as segments between their mesh vertices."""
    records = _records(records)
    verts = sorted({v for r in records for v in (r.a, r.b)})
    node_of = {v: k for k, v in enumerate(verts)}
    degree = {v: 0 for v in verts}
    for r in records:
        degree[r.a] += 1
        degree[r.b] += 1
    graph = JacobiGraph(PL, [
        Node(k, float(t.coords[v, 0]), float(t.coords[v, 1]), VERTEX,
             source_vertex=v, valence=degree[v])
        for k, v in enumerate(verts)
    ])
    pairs = {}
    for r in records:
        _add(pairs, node_of[r.a], node_of[r.b], -1)
    return _finish(graph, pairs)


# --------------------------------------------------------------------------
# Accounting


def predicted_removed(degrees):
    """Segments saved by the reduced drawing: sum over ``d > 2`` of ``C(d, 2) - d``."""
    return sum(math.comb(d, 2) - d for d in degrees if d > 2)


@dataclass
class ReductionStats:
    """Edge accounting for one record set.

    ``degrees`` maps each touched mesh vertex to its critical degree.
    """

    degrees: dict[int, int]
    n_critical: int
    n_high: int
    predicted_removed: int
    nonreduced_segments: int
    reduced_segments: int
    timings_ms: dict[str, float] = field(default_factory=dict)

    @property
    def measured_removed(self):
        return self.nonreduced_segments - self.reduced_segments

    @property
    def reduction_fraction(self):
        if self.nonreduced_segments == 0:
            return 0.0
        return self.measured_removed / self.nonreduced_segments

    @property
    def consistent(self):
        return self.measured_removed == self.predicted_removed

    def as_dict(self):
        return {
            "critical_edges": self.n_critical,
            "high_degree_vertices": self.n_high,
            "max_degree": max(self.degrees.values(), default=0),
            "nonreduced_segments": self.nonreduced_segments,
            "reduced_segments": self.reduced_segments,
            "predicted_removed": self.predicted_removed,
            "measured_removed": self.measured_removed,
            "reduction_percent": round(100.0 * self.reduction_fraction, 6),
        }


def reduction_stats(records, graphs, timings=None, check=True):
    """Compare the measured segment reduction with :func:`predicted_removed`.

    ``graphs`` maps mode names to graphs built from ``records`` and must
    contain the ``nonreduced`` and ``reduced`` drawings.

    Raises
    ------
    AccountingError
        If ``check`` is set and the measured and predicted counts disagree.
    """
    inc = build_vertex_incidence(records)
    degrees = {v: len(ks) for v, ks in inc.items()}
    stats = ReductionStats(
        degrees=degrees,
        n_critical=len(records),
        n_high=sum(1 for d in degrees.values() if d > 2),
        predicted_removed=predicted_removed(degrees.values()),
        nonreduced_segments=graphs[NONREDUCED].n_segments,
        reduced_segments=graphs[REDUCED].n_segments,
        timings_ms=dict(timings or {}),
    )
    if check and not stats.consistent:
        raise AccountingError(
            f"measured removal {stats.measured_removed} != predicted {stats.predicted_removed}"
        )
    return stats


def build_graphs(records, t=None, modes=MODES, boundary_vertices=None):
    """Build the requested drawings and time the two Jacobi-point connectivities.

    Returns ``(graphs, timings_ms)``.
    """
    graphs, timings = {}, {}
    if boundary_vertices is None and t is not None:
        boundary_vertices = t.boundary_vertices()
    if PL in modes:
        if t is None:
            raise ValueError("the pl drawing needs the triangulation")
        graphs[PL] = pl_graph(records, t)
    if NONREDUCED in modes:
        t0 = time.perf_counter()
        graphs[NONREDUCED] = nonreduced_connectivity(records)
        timings["nonreduced"] = 1e3 * (time.perf_counter() - t0)
    if REDUCED in modes:
        t0 = time.perf_counter()
        graphs[REDUCED] = reduced_connectivity(records, boundary_vertices)
        timings["reduced"] = 1e3 * (time.perf_counter() - t0)
    return graphs, timings
