"""Triangulation of a regular grid and the per-edge queries used downstream.

Id conventions (all row-major, stable across runs):

* vertex ``(i, j)`` has id ``j * nx + i``;
* edges are numbered horizontal first (``(i, j)-(i+1, j)``, id
  ``j * (nx-1) + i``), then vertical (``(i, j)-(i, j+1)``), then diagonal
  (``(i, j)-(i+1, j+1)``), each block row-major;
* every cell ``c = j * (nx-1) + i`` is split along its lower-left to
  upper-right diagonal into triangle ``2c`` (below the diagonal) and ``2c+1``
  (above it), both counter-clockwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "HORIZONTAL",
    "VERTICAL",
    "DIAGONAL",
    "Triangulation",
    "EdgeNeighborhood",
    "triangulate",
    "edge_neighborhood",
    "signed_parallelogram_area",
]

HORIZONTAL, VERTICAL, DIAGONAL = 0, 1, 2
EDGE_KIND_NAMES = ("horizontal", "vertical", "diagonal")


def signed_parallelogram_area(p1, p2, p3):
    """Twice the signed area of the triangle ``p1 p2 p3`` (positive if CCW)."""
    x1, y1 = p1
    x2, y2 = p2
    x3, y3 = p3
    return x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2)


@dataclass(frozen=True, eq=False)
class Triangulation:
    """Immutable triangulation of an ``nx`` by ``ny`` lattice.

    Attributes
    ----------
    edges : (E, 2) int array
        Endpoint vertex ids, lower id first.
    edge_kind : (E,) int array
        One of ``HORIZONTAL``, ``VERTICAL``, ``DIAGONAL``.
    triangles : (T, 3) int array
        Counter-clockwise vertex triples.
    link : (E, 2) int array
        Opposite vertices; column 0 lies left of the directed edge
        ``a -> b``, column 1 right of it, ``-1`` where absent.
    edge_triangles : (E, 2) int array
        Triangle ids matching the ``link`` columns, ``-1`` where absent.
    """

    nx: int
    ny: int
    origin: tuple[float, float]
    spacing: tuple[float, float]
    coords: np.ndarray
    edges: np.ndarray
    edge_kind: np.ndarray
    triangles: np.ndarray
    link: np.ndarray
    edge_triangles: np.ndarray

    @property
    def n_vertices(self):
        return self.nx * self.ny

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_triangles(self):
        return len(self.triangles)

    def vertex_id(self, i, j):
        return j * self.nx + i

    def vertex_ij(self, v):
        return int(v) % self.nx, int(v) // self.nx

    def is_boundary_vertex(self, v):
        i, j = self.vertex_ij(v)
        return i == 0 or j == 0 or i == self.nx - 1 or j == self.ny - 1

    def boundary_vertices(self):
        """Sorted array of vertex ids on the lattice boundary."""
        ij = np.arange(self.n_vertices)
        i, j = ij % self.nx, ij // self.nx
        mask = (i == 0) | (j == 0) | (i == self.nx - 1) | (j == self.ny - 1)
        return ij[mask]

    def interior_edges(self):
        """Ids of edges with two incident triangles."""
        return np.flatnonzero((self.link >= 0).all(axis=1))

    def edge_id(self, a, b):
        """Id of the edge joining vertices ``a`` and ``b``; ``KeyError`` if none."""
        a, b = sorted((int(a), int(b)))
        (ia, ja), (ib, jb) = self.vertex_ij(a), self.vertex_ij(b)
        nx, ny = self.nx, self.ny
        nh = (nx - 1) * ny
        nv = nx * (ny - 1)
        if jb == ja and ib == ia + 1:
            return ja * (nx - 1) + ia
        if ib == ia and jb == ja + 1:
            return nh + ja * nx + ia
        if ib == ia + 1 and jb == ja + 1:
            return nh + nv + ja * (nx - 1) + ia
        raise KeyError(f"vertices {a} and {b} are not joined by an edge")

    def bounds(self):
        x0, y0 = self.origin
        return (
            x0,
            y0,
            x0 + self.spacing[0] * (self.nx - 1),
            y0 + self.spacing[1] * (self.ny - 1),
        )


def triangulate(nx, ny, origin=(0.0, 0.0), spacing=(1.0, 1.0)):
    """Split each cell of the lattice along its lower-left/upper-right diagonal."""
    nx, ny = int(nx), int(ny)
    if nx < 2 or ny < 2:
        raise ValueError(f"need at least 2x2 vertices, got {nx}x{ny}")
    x0, y0 = (float(o) for o in origin)
    dx, dy = (float(s) for s in spacing)

    I, J = np.meshgrid(np.arange(nx), np.arange(ny))
    coords = np.column_stack([x0 + dx * I.reshape(-1), y0 + dy * J.reshape(-1)])

    def vid(i, j):
        return j * nx + i

    # cell (i, j) -> lower triangle 2c, upper triangle 2c + 1
    ci, cj = np.meshgrid(np.arange(nx - 1), np.arange(ny - 1))
    ci, cj = ci.reshape(-1), cj.reshape(-1)
    ll, lr = vid(ci, cj), vid(ci + 1, cj)
    ur, ul = vid(ci + 1, cj + 1), vid(ci, cj + 1)
    triangles = np.empty((2 * len(ci), 3), dtype=np.int64)
    triangles[0::2] = np.column_stack([ll, lr, ur])
    triangles[1::2] = np.column_stack([ll, ur, ul])

    def cell(i, j):
        return j * (nx - 1) + i

    blocks = []

    # horizontal (i, j)-(i+1, j): left (above) = lower tri of cell (i, j),
    # right (below) = upper tri of cell (i, j-1)
    hi, hj = np.meshgrid(np.arange(nx - 1), np.arange(ny))
    hi, hj = hi.reshape(-1), hj.reshape(-1)
    has_up, has_dn = hj < ny - 1, hj > 0
    blocks.append((
        np.column_stack([vid(hi, hj), vid(hi + 1, hj)]),
        HORIZONTAL,
        np.column_stack([
            np.where(has_up, vid(hi + 1, hj + 1), -1),
            np.where(has_dn, vid(hi, hj - 1), -1),
        ]),
        np.column_stack([
            np.where(has_up, 2 * cell(hi, np.minimum(hj, ny - 2)), -1),
            np.where(has_dn, 2 * cell(hi, np.maximum(hj - 1, 0)) + 1, -1),
        ]),
    ))

    # vertical (i, j)-(i, j+1): left = lower tri of cell (i-1, j),
    # right = upper tri of cell (i, j)
    vi, vj = np.meshgrid(np.arange(nx), np.arange(ny - 1))
    vi, vj = vi.reshape(-1), vj.reshape(-1)
    has_l, has_r = vi > 0, vi < nx - 1
    blocks.append((
        np.column_stack([vid(vi, vj), vid(vi, vj + 1)]),
        VERTICAL,
        np.column_stack([
            np.where(has_l, vid(vi - 1, vj), -1),
            np.where(has_r, vid(vi + 1, vj + 1), -1),
        ]),
        np.column_stack([
            np.where(has_l, 2 * cell(np.maximum(vi - 1, 0), vj), -1),
            np.where(has_r, 2 * cell(np.minimum(vi, nx - 2), vj) + 1, -1),
        ]),
    ))

    # diagonal (i, j)-(i+1, j+1): left = upper tri, right = lower tri
    c = cell(ci, cj)
    blocks.append((
        np.column_stack([ll, ur]),
        DIAGONAL,
        np.column_stack([ul, lr]),
        np.column_stack([2 * c + 1, 2 * c]),
    ))

    edges = np.concatenate([b[0] for b in blocks]).astype(np.int64)
    kind = np.concatenate([np.full(len(b[0]), b[1], dtype=np.int8) for b in blocks])
    link = np.concatenate([b[2] for b in blocks]).astype(np.int64)
    etri = np.concatenate([b[3] for b in blocks]).astype(np.int64)
    for arr in (coords, edges, kind, triangles, link, etri):
        arr.setflags(write=False)
    return Triangulation(nx, ny, (x0, y0), (dx, dy), coords, edges, kind, triangles, link, etri)


@dataclass(frozen=True)
class EdgeNeighborhood:
    """An edge ``ab`` together with its link vertices.

    For interior edges ``v1`` is left of the directed edge ``a -> b`` and
    ``v2`` right of it, and ``(a, v1, b, v2)`` is the enclosing quad cycle.
    Boundary edges have ``v2 = None``, ``v1`` set to the single link vertex
    and ``boundary = True``.
    """

    edge: int
    a: int
    b: int
    v1: int
    v2: int | None
    pa: tuple[float, float]
    pb: tuple[float, float]
    pv1: tuple[float, float]
    pv2: tuple[float, float] | None
    boundary: bool = False

    @property
    def quad(self):
        """Vertex ids of the cycle ``(a, v1, b, v2)``."""
        if self.boundary:
            raise ValueError(f"edge {self.edge} is a boundary edge and has no quad")
        return (self.a, self.v1, self.b, self.v2)

    @property
    def quad_coords(self):
        if self.boundary:
            raise ValueError(f"edge {self.edge} is a boundary edge and has no quad")
        return np.array([self.pa, self.pv1, self.pb, self.pv2], dtype=np.float64)

    @property
    def midpoint(self):
        return (
            self.pa[0] + (self.pb[0] - self.pa[0]) / 2,
            self.pa[1] + (self.pb[1] - self.pa[1]) / 2,
        )

    @classmethod
    def from_points(cls, pa, pb, pv1, pv2, ids=(0, 1, 2, 3), edge=-1):
        """Hand-built neighborhood, mostly for tests and small experiments."""
        a, b, v1, v2 = ids
        pt = lambda p: (float(p[0]), float(p[1]))  # noqa: E731
        return cls(edge, a, b, v1, v2, pt(pa), pt(pb), pt(pv1), pt(pv2), False)


def edge_neighborhood(t, e):
    """Link vertices of edge ``e`` of triangulation ``t``."""
    e = int(e)
    if not 0 <= e < t.n_edges:
        raise IndexError(f"unknown edge id {e} (triangulation has {t.n_edges} edges)")
    a, b = (int(v) for v in t.edges[e])
    left, right = (int(v) for v in t.link[e])
    pt = lambda v: (float(t.coords[v, 0]), float(t.coords[v, 1]))  # noqa: E731
    if left < 0 or right < 0:
        v = left if left >= 0 else right
        return EdgeNeighborhood(e, a, b, v, None, pt(a), pt(b), pt(v), None, True)
    return EdgeNeighborhood(e, a, b, left, right, pt(a), pt(b), pt(left), pt(right), False)
