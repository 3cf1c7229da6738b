"""Partition comparison: entropy, mutual information, NMI_max and AMI_max.

All quantities use natural logarithms. AMI_max adjusts the mutual
information by its exact expectation under the permutation model (uniformly
random contingency tables with fixed marginals),

    AMI_max = (I - E[I]) / (max{H(g), H(h)} - E[I]),

which centers the score at zero for unrelated partitions. The expectation
is computed exactly from the hypergeometric distribution of each table
cell, with log-factorial accumulation for numerical stability.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError
from .modularity import Partition


@dataclass(frozen=True)
class ContingencyTable:
    """Cluster co-occurrence counts of two partitions of the same nodes."""

    counts: np.ndarray  # (clusters of g, clusters of h)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @classmethod
    def from_partitions(cls, g: Partition, h: Partition) -> "ContingencyTable":
        if g.n != h.n:
            raise DomainError(
                f"partition sizes differ: {g.n} vs {h.n}")
        counts = np.zeros((g.num_clusters, h.num_clusters), dtype=np.int64)
        np.add.at(counts, (g.assignments, h.assignments), 1)
        return cls(counts)


def entropy(partition: Partition) -> float:
    """H(g) = -sum_c (n_c / n) ln(n_c / n), with 0 ln 0 = 0."""
    frac = partition.cluster_sizes / partition.n
    frac = frac[frac > 0]
    return float(-np.sum(frac * np.log(frac)))


def mutual_information(g: Partition, h: Partition) -> float:
    """I(g, h) = sum_cd (n_cd / n) ln(n n_cd / (a_c b_d))."""
    table = ContingencyTable.from_partitions(g, h)
    n = table.n
    a = table.row_sums
    b = table.col_sums
    total = 0.0
    rows, cols = np.nonzero(table.counts)
    for c, d in zip(rows, cols):
        ncd = table.counts[c, d]
        total += (ncd / n) * np.log(n * ncd / (a[c] * b[d]))
    return float(total)


def expected_mi(g: Partition, h: Partition) -> float:
    """Exact E[I] under the permutation model.

    Sums over clusters c, d and all feasible cell counts n_cd, weighting
    each mutual-information term by the hypergeometric probability of that
    cell count given the fixed marginals.
    """
    table = ContingencyTable.from_partitions(g, h)
    n = table.n
    a = table.row_sums
    b = table.col_sums
    lgn = gammaln(np.arange(n + 2))  # lgn[k] = ln (k-1)!
    total = 0.0
    for ac in a:
        for bd in b:
            lo = max(1, ac + bd - n)
            hi = min(ac, bd)
            if hi < lo:
                continue
            nij = np.arange(lo, hi + 1)
            term = (nij / n) * np.log(n * nij / (ac * bd))
            log_p = (lgn[ac + 1] + lgn[bd + 1]
                     + lgn[n - ac + 1] + lgn[n - bd + 1]
                     - lgn[n + 1] - lgn[nij + 1] - lgn[ac - nij + 1]
                     - lgn[bd - nij + 1] - lgn[n - ac - bd + nij + 1])
            total += float(np.sum(term * np.exp(log_p)))
    return total


def nmi_max(g: Partition, h: Partition) -> float:
    """I / max{H(g), H(h)}; 1 for identical partitions."""
    hg, hh = entropy(g), entropy(h)
    denom = max(hg, hh)
    if denom == 0.0:
        if g == h:
            return 1.0
        raise DomainError("NMI undefined: both partitions are trivial")
    return mutual_information(g, h) / denom


def ami_max(g: Partition, h: Partition) -> float:
    """(I - E[I]) / (max{H, H} - E[I]); 1 for identical partitions.

    When the denominator degenerates to zero the value is 1 if the
    partitions agree (up to relabeling) and otherwise 0 with a warning.
    """
    hg, hh = entropy(g), entropy(h)
    emi = expected_mi(g, h)
    denom = max(hg, hh) - emi
    if abs(denom) < 1e-15:
        if g == h:
            return 1.0
        warnings.warn("degenerate AMI denominator for unequal partitions; "
                      "returning 0", RuntimeWarning, stacklevel=2)
        return 0.0
    return (mutual_information(g, h) - emi) / denom
