"""Why AMI instead of NMI for comparing partitions.

NMI_max overstates similarity when one partition has many small clusters;
AMI_max subtracts the expected mutual information under the permutation
model and is centered at zero for unrelated partitions.
"""

import numpy as np

from hiercons import Partition, ami_max, entropy, expected_mi, mutual_information, nmi_max

rng = np.random.default_rng(0)
n = 120
truth = Partition(np.repeat(np.arange(4), n // 4))

print("truth: 4 equal clusters, H =", round(entropy(truth), 3))

# a partition that fragments everything into tiny clusters
fragmented = Partition(rng.integers(0, 40, n))
# a genuinely unrelated 4-cluster partition
unrelated = Partition(rng.integers(0, 4, n))

for name, other in (("fragmented-40", fragmented), ("unrelated-4", unrelated)):
    i = mutual_information(truth, other)
    e = expected_mi(truth, other)
    print(f"\n{name}:")
    print(f"  I = {i:.3f}, E[I] under permutation model = {e:.3f}")
    print(f"  NMI_max = {nmi_max(truth, other):.3f}   <- inflated for many clusters")
    print(f"  AMI_max = {ami_max(truth, other):.3f}   <- centered at zero")

print("\nself comparison:", ami_max(truth, truth))
relabeled = Partition((truth.assignments + 2) % 4)
print("label-permuted copy:", ami_max(truth, relabeled))
