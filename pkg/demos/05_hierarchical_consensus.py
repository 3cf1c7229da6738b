"""Full pipeline: benchmark network -> event ensemble -> consensus hierarchy.

Generates a two-level planted network, samples a multiresolution ensemble
with event sampling, extracts the consensus hierarchy and compares its cuts
with both planted levels. Takes a minute or two.
"""

import numpy as np

from hiercons import (HierBenchmarkSpec, all_cuts, ami_max,
                      estimate_gamma_min, gamma_max, generate_ensemble,
                      generate_network, hierarchical_consensus,
                      sample_gammas, sample_hierarchy)

spec = HierBenchmarkSpec(n=300, p=(0.2, 0.2, 0.6), seed=11)
planted = sample_hierarchy(spec)
graph = generate_network(spec, planted)
print(f"benchmark: n={graph.n}, planted levels with "
      f"{planted.level1.num_clusters} and {planted.level2.num_clusters} clusters")

g_min = estimate_gamma_min(graph, seed=5)
g_max = gamma_max(graph)
gammas = sample_gammas(graph, "event", 150, (g_min, g_max))
ensemble = generate_ensemble(graph, gammas, seed=17, workers=2)
print(f"ensemble of {ensemble.size} partitions over gamma in "
      f"[{g_min:.2f}, {g_max:.1f}]")

tree = hierarchical_consensus(ensemble, alpha=0.05, seed=23, workers=2)
print(f"consensus hierarchy: {len(tree.nodes)} clusters, depth {tree.depth()}, "
      f"{len(tree.leaves())} leaves")


def show(node, indent=0):
    mark = "leaf" if node.is_leaf else f"{len(node.children)} children"
    print(f"  {'  ' * indent}[{node.id:3d}] size {node.members.size:4d} "
          f"<C>={node.strength:.3f} ({mark})")
    for child in tree.children_of(node):
        show(child, indent + 1)


show(tree.root)

print("\ncuts of the dendrogram (strength threshold -> partition):")
for strength, part in all_cuts(tree):
    a1 = ami_max(part, planted.level1)
    a2 = ami_max(part, planted.level2)
    print(f"  threshold {strength:.3f}: {part.num_clusters:3d} clusters  "
          f"AMI vs level1 {a1:.3f}  vs level2 {a2:.3f}")

coarse = tree.coarse_partition()
leaf = tree.leaf_partition()
print("\ncoarsest cut vs planted level 1:", round(ami_max(coarse, planted.level1), 3))
print("leaf partition vs planted level 2:", round(ami_max(leaf, planted.level2), 3))
