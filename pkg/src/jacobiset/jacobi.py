"""Gradient alignment values, PL critical edges and local bilinear Jacobi points.

The gradient alignment value of two fields is
``kappa = df/dx * dg/dy - df/dy * dg/dx``; the Jacobi set is its zero set.
An interior edge ``ab`` is critical when the (constant) values of ``kappa``
on its two incident triangles have strictly opposite signs. Each critical
edge gets one Jacobi set point on the polyline ``v1 -> m -> v2`` through the
edge midpoint ``m``, placed at the zero crossing of ``kappa`` between the
link vertices.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .mesh import Triangulation, signed_parallelogram_area, triangulate

logger = logging.getLogger(__name__)

__all__ = [
    "LINEAR",
    "BILINEAR",
    "LINEAR_FALLBACK",
    "DegenerateGeometryError",
    "GridMismatchError",
    "KappaPair",
    "CriticalEdgeRecord",
    "DegreeReport",
    "kappa_linear",
    "kappa_bilinear",
    "bilinear_kappa_at",
    "triangle_kappa",
    "is_critical",
    "jacobi_point",
    "select_lambda",
    "place_point",
    "critical_edge_ids",
    "extract_critical_edges",
    "check_even_degree",
]

LINEAR = "linear"
BILINEAR = "bilinear"
LINEAR_FALLBACK = "linear-fallback"

# |raw lambda| may leave [0, 1] by this much before a warning is logged
LAMBDA_SLACK = 1e-9


class DegenerateGeometryError(ValueError):
    pass


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class KappaPair:
    kappa_v1: float
    kappa_v2: float
    kind: str = LINEAR

    def __iter__(self):
        return iter((self.kappa_v1, self.kappa_v2))


@dataclass(frozen=True, slots=True)
class CriticalEdgeRecord:
    """A PL-critical edge and its Jacobi set point.

    ``lam`` parametrizes the polyline ``v1 -> m -> v2`` (0 at ``v1``,
    1/2 at the midpoint ``m``, 1 at ``v2``).
    """

    edge: int
    a: int
    b: int
    point: tuple[float, float]
    lam: float
    kappa_source: str
    v1: int = -1
    v2: int = -1
    kappa_li: tuple[float, float] = (np.nan, np.nan)
    kappa_bi: tuple[float, float] = (np.nan, np.nan)
    degenerate: bool = False

    @property
    def endpoints(self):
        return (self.a, self.b)


@dataclass
class DegreeReport:
    """Critical-edge degree of every mesh vertex.

    ``odd_interior`` lists interior vertices with odd degree, which the Even
    Degree Lemma rules out when no alignment value is exactly zero.
    """

    degree: np.ndarray
    odd_interior: list[int] = field(default_factory=list)
    boundary_degrees: dict[int, int] = field(default_factory=dict)

    @property
    def ok(self):
        return not self.odd_interior

    @property
    def n_edges(self):
        return int(self.degree.sum()) // 2


def _values(field_):
    return field_.values if hasattr(field_, "values") else np.asarray(field_, dtype=np.float64)


def _tri_kappa(ids, pts, fv, gv):
    """Constant alignment value on one triangle.

    The vertices are taken in ascending id order so every edge touching this
    triangle gets a bit-identical result.
    """
    order = sorted(range(3), key=lambda k: ids[k])
    p, q, r = (pts[k] for k in order)
    ip, iq, ir = (ids[k] for k in order)
    area = signed_parallelogram_area(p, q, r)
    if area == 0.0:
        raise DegenerateGeometryError(f"triangle {tuple(ids)} has zero area")
    f_p, f_q, f_r = float(fv[ip]), float(fv[iq]), float(fv[ir])
    g_p, g_q, g_r = float(gv[ip]), float(gv[iq]), float(gv[ir])
    # difference form: exactly antisymmetric in (f, g), so f == g gives 0.0
    num = (f_q - f_p) * (g_r - g_p) - (f_r - f_p) * (g_q - g_p)
    return num / area


def kappa_linear(nb, f, g):
    """Alignment values of the PL interpolants on triangles ``abv1`` and ``av2b``.

    ``f`` and ``g`` are grids (or arrays indexed by vertex id).
    """
    if nb.boundary:
        raise ValueError(f"edge {nb.edge} is a boundary edge")
    fv, gv = _values(f), _values(g)
    k1 = _tri_kappa((nb.a, nb.b, nb.v1), (nb.pa, nb.pb, nb.pv1), fv, gv)
    k2 = _tri_kappa((nb.a, nb.v2, nb.b), (nb.pa, nb.pv2, nb.pb), fv, gv)
    return KappaPair(k1, k2, LINEAR)


def triangle_kappa(f, g, t):
    """Per-triangle alignment values of the PL interpolants, shape ``(T,)``."""
    ids = np.sort(t.triangles, axis=1)
    fv, gv = _values(f), _values(g)
    P, Q, R = (t.coords[ids[:, k]] for k in range(3))
    area = P[:, 0] * (Q[:, 1] - R[:, 1]) + Q[:, 0] * (R[:, 1] - P[:, 1]) + R[:, 0] * (P[:, 1] - Q[:, 1])
    f_p, f_q, f_r = (fv[ids[:, k]] for k in range(3))
    g_p, g_q, g_r = (gv[ids[:, k]] for k in range(3))
    num = (f_q - f_p) * (g_r - g_p) - (f_r - f_p) * (g_q - g_p)
    return num / area


def is_critical(k):
    """Strict sign test: ``kappa_v1 * kappa_v2 < 0``. Zeros are never critical."""
    return bool(k.kappa_v1 * k.kappa_v2 < 0)


# bilinear shape functions on the unit square, corners ordered (0,0) (1,0) (1,1) (0,1)
def _shape_derivs(s, t):
    s = np.asarray(s, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    dns = np.stack([-(1 - t), 1 - t, t, -t], axis=-1)
    dnt = np.stack([-(1 - s), -s, s, 1 - s], axis=-1)
    return dns, dnt


def bilinear_kappa_at(quad, fq, gq, s, t):
    """Alignment value of the isoparametric bilinear interpolants at ``(s, t)``.

    Parameters
    ----------
    quad : (..., 4, 2) array
        Corner coordinates, mapped to the unit-square corners
        ``(0,0), (1,0), (1,1), (0,1)`` in that order.
    fq, gq : (..., 4) arrays
        Field samples at the corners.
    s, t : float or array broadcastable to ``quad.shape[:-2]``

    Notes
    -----
    With ``J`` the Jacobian of the map ``(s, t) -> (x, y)``, the chain rule
    gives ``kappa = (F_s G_t - F_t G_s) / det J``.
    """
    quad = np.asarray(quad, dtype=np.float64)
    fq = np.asarray(fq, dtype=np.float64)
    gq = np.asarray(gq, dtype=np.float64)
    dns, dnt = _shape_derivs(s, t)
    xs = np.sum(dns * quad[..., 0], axis=-1)
    ys = np.sum(dns * quad[..., 1], axis=-1)
    xt = np.sum(dnt * quad[..., 0], axis=-1)
    yt = np.sum(dnt * quad[..., 1], axis=-1)
    det = xs * yt - xt * ys
    if np.any(det == 0.0):
        raise DegenerateGeometryError("bilinear map has a singular Jacobian")
    Fs, Ft = np.sum(dns * fq, axis=-1), np.sum(dnt * fq, axis=-1)
    Gs, Gt = np.sum(dns * gq, axis=-1), np.sum(dnt * gq, axis=-1)
    return (Fs * Gt - Ft * Gs) / det


def kappa_bilinear(nb, f, g):
    """Bilinear alignment values at the link-vertex corners of the quad ``(a, v1, b, v2)``."""
    fv, gv = _values(f), _values(g)
    ids = list(nb.quad)
    quad = nb.quad_coords
    fq, gq = fv[ids], gv[ids]
    k1 = float(bilinear_kappa_at(quad, fq, gq, 1.0, 0.0))
    k2 = float(bilinear_kappa_at(quad, fq, gq, 0.0, 1.0))
    return KappaPair(k1, k2, BILINEAR)


def select_lambda(kli, kbi):
    """Zero-crossing parameter and which pair it came from.

    The bilinear pair is used when its signs differ, the linear pair
    otherwise. Returns ``(lam, source, degenerate)``; ``lam`` is the zero of
    the linear interpolant between the two values, clamped to [0, 1].
    """
    k1, k2 = kbi
    source = BILINEAR
    if not k1 * k2 < 0:
        k1, k2 = kli
        source = LINEAR_FALLBACK
    denom = k1 - k2
    if denom == 0.0:
        return 0.5, source, True
    lam = k1 / denom
    if lam < -LAMBDA_SLACK or lam > 1 + LAMBDA_SLACK:
        logger.warning("lambda %.17g outside [0, 1] (kappa %r, %r); clamping", lam, k1, k2)
    return min(max(lam, 0.0), 1.0), source, False


def place_point(pv1, pa, pb, pv2, lam):
    """Point at parameter ``lam`` on the polyline ``v1 -> m -> v2``."""
    mx = pa[0] + (pb[0] - pa[0]) / 2
    my = pa[1] + (pb[1] - pa[1]) / 2
    if lam < 0.5:
        return (pv1[0] + 2 * lam * (mx - pv1[0]), pv1[1] + 2 * lam * (my - pv1[1]))
    c = 1 - 2 * lam
    return (mx + c * (mx - pv2[0]), my + c * (my - pv2[1]))


def jacobi_point(nb, kli, f, g, kbi=None):
    """Jacobi set point of one critical edge.

    ``kbi`` may be supplied to skip the bilinear evaluation.
    """
    if kbi is None:
        kbi = kappa_bilinear(nb, f, g)
    lam, source, degenerate = select_lambda(tuple(kli), tuple(kbi))
    if degenerate:
        lam = 0.5
    p = place_point(nb.pv1, nb.pa, nb.pb, nb.pv2, lam)
    return CriticalEdgeRecord(
        nb.edge, nb.a, nb.b, p, lam, source, nb.v1, nb.v2,
        (kli.kappa_v1, kli.kappa_v2) if isinstance(kli, KappaPair) else tuple(kli),
        (kbi.kappa_v1, kbi.kappa_v2) if isinstance(kbi, KappaPair) else tuple(kbi),
        degenerate,
    )


# --------------------------------------------------------------------------
# Whole-grid extraction


def _check_inputs(f, g, t):
    if not f.same_lattice(g):
        raise GridMismatchError(
            f"field grids differ: {f.nx}x{f.ny} {f.origin} {f.spacing} vs "
            f"{g.nx}x{g.ny} {g.origin} {g.spacing}"
        )
    if t is None:
        return triangulate(f.nx, f.ny, f.origin, f.spacing)
    if (t.nx, t.ny) != (f.nx, f.ny):
        raise GridMismatchError(
            f"triangulation is {t.nx}x{t.ny} but fields are {f.nx}x{f.ny}"
        )
    return t


def _interior_kappa(f, g, t):
    tk = triangle_kappa(f, g, t)
    interior = t.interior_edges()
    k1 = tk[t.edge_triangles[interior, 0]]
    k2 = tk[t.edge_triangles[interior, 1]]
    return interior, k1, k2


def critical_edge_ids(f, g, t=None):
    """Sorted ids of the PL-critical edges (no Jacobi points)."""
    t = _check_inputs(f, g, t)
    interior, k1, k2 = _interior_kappa(f, g, t)
    return interior[k1 * k2 < 0]


def _points_chunk(t, fv, gv, eids, kl1, kl2):
    a, b = t.edges[eids, 0], t.edges[eids, 1]
    v1, v2 = t.link[eids, 0], t.link[eids, 1]
    quad_ids = np.column_stack([a, v1, b, v2])
    quad = t.coords[quad_ids]
    fq, gq = fv[quad_ids], gv[quad_ids]
    kb1 = bilinear_kappa_at(quad, fq, gq, 1.0, 0.0)
    kb2 = bilinear_kappa_at(quad, fq, gq, 0.0, 1.0)
    out = []
    C = t.coords
    for k in range(len(eids)):
        kli = (float(kl1[k]), float(kl2[k]))
        kbi = (float(kb1[k]), float(kb2[k]))
        lam, source, degenerate = select_lambda(kli, kbi)
        ia, ib, i1, i2 = int(a[k]), int(b[k]), int(v1[k]), int(v2[k])
        p = place_point(C[i1], C[ia], C[ib], C[i2], lam)
        out.append(CriticalEdgeRecord(
            int(eids[k]), ia, ib, (float(p[0]), float(p[1])), lam, source,
            i1, i2, kli, kbi, degenerate,
        ))
    return out


def extract_critical_edges(f, g, t=None, threads=1):
    """Run the PL criticality test on every interior edge and place Jacobi points.

    Parameters
    ----------
    f, g : ScalarGrid
        Fields on the same lattice.
    t : Triangulation, optional
        Built from ``f`` when omitted.
    threads : int
        Number of worker threads for the point computation. The result is
        sorted by edge id and does not depend on this value.

    Returns
    -------
    list of CriticalEdgeRecord
    """
    t = _check_inputs(f, g, t)
    interior, k1, k2 = _interior_kappa(f, g, t)
    crit = k1 * k2 < 0
    eids, kl1, kl2 = interior[crit], k1[crit], k2[crit]
    fv, gv = f.values, g.values
    if threads <= 1 or len(eids) < 2 * threads:
        return _points_chunk(t, fv, gv, eids, kl1, kl2)
    bounds = np.linspace(0, len(eids), threads + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(
            lambda lo_hi: _points_chunk(
                t, fv, gv, eids[lo_hi[0]:lo_hi[1]], kl1[lo_hi[0]:lo_hi[1]], kl2[lo_hi[0]:lo_hi[1]]
            ),
            zip(bounds[:-1], bounds[1:]),
        )
        return [r for part in parts for r in part]


def check_even_degree(records, t: Triangulation):
    """Count critical edges per mesh vertex and flag odd interior vertices."""
    degree = np.zeros(t.n_vertices, dtype=np.int64)
    for r in records:
        degree[r.a] += 1
        degree[r.b] += 1
    boundary = np.zeros(t.n_vertices, dtype=bool)
    boundary[t.boundary_vertices()] = True
    odd = np.flatnonzero((degree % 2 == 1) & ~boundary)
    bdeg = {int(v): int(degree[v]) for v in np.flatnonzero(boundary & (degree > 0))}
    return DegreeReport(degree, [int(v) for v in odd], bdeg)
