"""Anatomy of the two-level hierarchical benchmark generator."""

import numpy as np

from hiercons import HierBenchmarkSpec, generate_network, sample_hierarchy
from hiercons.benchmark import generate_network as _gen

spec = HierBenchmarkSpec(n=500, p=(0.3, 0.3, 0.4), seed=7)
hierarchy = sample_hierarchy(spec)

s1 = hierarchy.level1.cluster_sizes
s2 = hierarchy.level2.cluster_sizes
print("level-1 cluster sizes:", sorted(s1.tolist(), reverse=True))
print("level-2 cluster sizes:", sorted(s2.tolist(), reverse=True))

graph, levels = generate_network(spec, hierarchy, return_levels=True)
print(f"\nnetwork: n={graph.n}, m={levels.size} edge draws, "
      f"2m={graph.total_weight:.0f}")
print("strength range:", graph.strengths.min(), "-", graph.strengths.max())

frac = np.bincount(levels, minlength=3) / levels.size
print("requested level fractions:", spec.p)
print("realized  level fractions:", frac.round(3))

# edges constrained to a level land inside the matching blocks
a = graph.adjacency()
for name, part, level in (("level-1", hierarchy.level1, 1),
                          ("level-2", hierarchy.level2, 2)):
    within = sum(a[np.ix_(m, m)].sum() for m in part.clusters())
    print(f"weight inside {name} blocks: {within / a.sum():.3f} "
          f"(>= p{level} by construction)")
