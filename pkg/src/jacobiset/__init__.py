"""Local bilinear Jacobi sets of 2D scalar field pairs with reduced connectivity.

The pipeline is ``fields`` (grids, analytic data, noise) -> ``mesh``
(triangulation) -> ``jacobi`` (critical edges and Jacobi set points) ->
``connectivity`` (PL, non-reduced and reduced drawings). ``simplicial``
holds the collapse/nerve/homology machinery used to check the drawings.
"""

from .connectivity import (
    JacobiGraph,
    ReductionStats,
    build_graphs,
    nonreduced_connectivity,
    pl_graph,
    reduced_connectivity,
    reduction_stats,
)
from .fields import (
    DEFAULT_MIXTURE,
    GaussianComponent,
    GaussianMixtureSpec,
    NoiseSpec,
    ScalarGrid,
    apply_noise,
    gen_analytic,
    load_grid,
    save_grid,
)
from .jacobi import (
    CriticalEdgeRecord,
    check_even_degree,
    extract_critical_edges,
    kappa_bilinear,
    kappa_linear,
)
from .mesh import Triangulation, edge_neighborhood, triangulate

__version__ = "0.1.0"

__all__ = [
    "CriticalEdgeRecord",
    "DEFAULT_MIXTURE",
    "GaussianComponent",
    "GaussianMixtureSpec",
    "JacobiGraph",
    "NoiseSpec",
    "ReductionStats",
    "ScalarGrid",
    "Triangulation",
    "apply_noise",
    "build_graphs",
    "check_even_degree",
    "edge_neighborhood",
    "extract_critical_edges",
    "gen_analytic",
    "kappa_bilinear",
    "kappa_linear",
    "load_grid",
    "nonreduced_connectivity",
    "pl_graph",
    "reduced_connectivity",
    "reduction_stats",
    "save_grid",
    "triangulate",
]
