"""Walk through the whole pipeline on the analytic field pair.

    python3 demos/01_analytic_pipeline.py [resolution] [outdir]

Generates the two Gaussian-mixture fields, finds the PL critical edges,
places one Jacobi point per edge, and builds the three drawings. The SVGs
land in ``outdir`` (default ``demo_out/``).
"""

import sys
from pathlib import Path

from jacobiset import (
    build_graphs,
    check_even_degree,
    extract_critical_edges,
    gen_analytic,
    reduction_stats,
    triangulate,
)
from jacobiset.export import export_segments

res = int(sys.argv[1]) if len(sys.argv) > 1 else 81
out = Path(sys.argv[2]) if len(sys.argv) > 2 else Path("demo_out")
out.mkdir(exist_ok=True)

f, g = gen_analytic(res)
t = triangulate(f.nx, f.ny, f.origin, f.spacing)
print(f"{res}x{res} grid: {t.n_vertices} vertices, {t.n_edges} edges, {t.n_triangles} triangles")

records = extract_critical_edges(f, g, t)
print(f"{len(records)} critical edges")

# Every interior vertex should touch an even number of them.
report = check_even_degree(records, t)
print("odd interior vertices:", report.odd_interior or "none")

graphs, timings = build_graphs(records, t)
for mode, graph in graphs.items():
    path = export_segments(graph, out / f"{mode}.svg", "svg", t.bounds())
    print(f"  {mode:10s} {graph.n_segments:6d} segments  betti={graph.betti()}  -> {path}")

stats = reduction_stats(records, graphs, timings)
print(
    f"reduced drawing drops {stats.measured_removed} of {stats.nonreduced_segments} segments "
    f"({100 * stats.reduction_fraction:.1f}%), predicted {stats.predicted_removed}"
)

# With an even resolution the peak of g sits on a cell centre. The flat
# triangles there have alignment exactly zero and leave two odd vertices.
if res % 2 == 0:
    print("(even resolution: expect a couple of odd vertices at the centre of g)")
