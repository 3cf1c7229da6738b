"""Flat consensus clustering against the thresholded-C baseline.

The significance-based consensus needs no threshold knob: the baseline's
result depends on tau, and a badly chosen tau fragments or merges.
"""

import numpy as np

from hiercons import Partition, PartitionEnsemble, ami_max, consensus_partition, lf_consensus

rng = np.random.default_rng(2)
truth = np.array([0] * 10 + [1] * 10)
ensemble = PartitionEnsemble(tuple(
    Partition(np.where(rng.random(20) < 0.05, 1 - truth, truth))
    for _ in range(100)))
planted = Partition(truth)

result = consensus_partition(ensemble, alpha=0.05, seed=3)
print("significance consensus:", result.num_clusters, "clusters,",
      "AMI vs planted =", round(ami_max(result, planted), 3))

for tau in (0.0, 0.5, 0.9, 0.99):
    lf = lf_consensus(ensemble, tau, seed=4)
    print(f"LF baseline tau={tau:4.2f}: {lf.num_clusters} clusters, "
          f"AMI vs planted = {ami_max(lf, planted):.3f}")
