"""How noise inflates the Jacobi set, and how much the reduced drawing saves.

    python3 demos/02_noise_and_reduction.py [n_seeds]
"""

import sys
from collections import Counter

import numpy as np

from jacobiset import NoiseSpec, apply_noise, build_graphs, extract_critical_edges, gen_analytic, triangulate
from jacobiset.connectivity import NONREDUCED, REDUCED, reduction_stats

n_seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 5
f0, g0 = gen_analytic(80)
t = triangulate(80, 80, f0.origin, f0.spacing)


def rel_sigma(grid, rel=0.01):
    return rel * float(grid.values.max() - grid.values.min())


clean = extract_critical_edges(f0, g0, t)
print(f"clean fields: {len(clean)} critical edges")

fractions = []
for seed in range(n_seeds):
    f = apply_noise(f0, NoiseSpec(gaussian_sigma=rel_sigma(f0), seed=seed, stream=0))
    g = apply_noise(g0, NoiseSpec(gaussian_sigma=rel_sigma(g0), seed=seed, stream=1))
    records = extract_critical_edges(f, g, t)
    graphs, _ = build_graphs(records, t, modes=(NONREDUCED, REDUCED))
    stats = reduction_stats(records, graphs)
    degrees = Counter(stats.degrees.values())
    fractions.append(stats.reduction_fraction)
    print(
        f"seed {seed}: {len(records):5d} edges, "
        f"{stats.nonreduced_segments:5d} -> {stats.reduced_segments:5d} segments, "
        f"degree histogram {dict(sorted(degrees.items()))}"
    )

print(f"mean reduction {100 * np.mean(fractions):.1f}%")
