"""Co-classification statistics and partition null models.

An ensemble of noisy two-block partitions has high co-classification inside
the blocks and low across. The permutation and local permutation models
supply the expected co-classification of a random pair, and the significance
quantile tells us which observed values are too low to be chance.
"""

import numpy as np

from hiercons import (Partition, PartitionEnsemble, coclassification,
                      consensus_null_matrix, null_moments, null_prob_local,
                      null_prob_permutation, significance_threshold)

rng = np.random.default_rng(2)
truth = np.array([0] * 10 + [1] * 10)
parts = tuple(Partition(np.where(rng.random(20) < 0.05, 1 - truth, truth))
              for _ in range(100))
ensemble = PartitionEnsemble(parts)

C = coclassification(ensemble)
blocks = np.arange(10)
print("mean C within block 0 :", C[np.ix_(blocks, blocks)].mean().round(3))
print("mean C across blocks  :", C[np.ix_(blocks, blocks + 10)].mean().round(3))

one = parts[0]
print("\nper-partition null probabilities (pair i != j):")
print("  permutation model  :", round(null_prob_permutation(one), 4))
print("  local, node 0 fixed:", round(null_prob_local(one, 0), 4))

mu, sigma2 = null_moments(ensemble, "local_permutation")
print("\nensemble-level moments for pair (0, 15):")
print(f"  mu = {mu[0, 15]:.4f}, sigma^2 = {sigma2[0, 15]:.6f}")

q = significance_threshold(mu[0, 15], sigma2[0, 15], alpha=0.05)
print(f"  5% quantile of the null mean = {q:.4f}; observed C = {C[0, 15]:.4f}")
print("  -> significantly depleted" if C[0, 15] < q else "  -> consistent with the null")

P = consensus_null_matrix(ensemble, alpha=0.05)
B = C - P
print("\nconsensus interaction matrix B = C - P(alpha):")
print("  negative entries across blocks:",
      int((B[np.ix_(blocks, blocks + 10)] < 0).sum()), "of 100")
print("  negative entries within block 0:",
      int((B[np.ix_(blocks, blocks)] < 0).sum()), "of 100")
