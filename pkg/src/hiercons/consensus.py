"""Consensus clustering and the recursive hierarchical consensus procedure.

Flat consensus optimizes the quality function

    Q_C(g, alpha) = sum_ij (C_ij - P_ij(alpha)) delta(g_i, g_j)

where P(alpha) is the matrix of significance quantiles under the local
permutation model: only pairs co-classified significantly less often than
the null allows contribute negatively. A new ensemble is generated by
optimizing Q_C, the co-classification matrix is recomputed, and the step
repeats until C is binary (all partitions identical). No thresholding of C
is applied at any point.

The hierarchical procedure applies flat consensus recursively inside each
found cluster, with null probabilities recomputed on the restricted node
set, and stops where a cluster has no significant sub-clusters. Every tree
node carries a cluster strength: the mean of the original co-classification
matrix over its member pairs.

The thresholded-C iteration of Lancichinetti-Fortunato is included as a
benchmarking baseline.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError
from .graph import Graph, config_null_matrix
from .modularity import Partition, QualityProblem
from .ensemble import (PartitionEnsemble, coclass_counts, coclassification,
                       consensus_null_matrix, optimize_many)
from .seeding import as_seed_sequence, child

CONSENSUS_MAX_ITER = 50


def _binary_partition(counts: np.ndarray, l: int) -> Partition | None:
    """Partition encoded by a binary co-classification, else None.

    Entries of C are multiples of 1/l, so binarity is an exact integer
    check on the counts.
    """
    if not np.all((counts == 0) | (counts == l)):
        return None
    n = counts.shape[0]
    labels = np.full(n, -1, dtype=np.int64)
    nxt = 0
    for i in range(n):
        if labels[i] < 0:
            members = np.flatnonzero(counts[i] == l)
            labels[members] = nxt
            nxt += 1
    return Partition(labels)


def consensus_partition(ensemble: PartitionEnsemble, alpha: float, seed,
                        node_subset=None, workers: int = 1,
                        max_iter: int = CONSENSUS_MAX_ITER) -> Partition:
    """Iterative consensus of an ensemble at significance level alpha.

    Builds B = C - P(alpha), symmetrized as (B + B^T)/2, generates a fresh
    ensemble of the same size by optimizing B, recomputes C, and stops when
    C is binary, returning the partition all member partitions agree on.

    If B has no strictly negative off-diagonal entry, no pair is
    co-classified significantly less often than the null allows, so no
    split is justified at level alpha and the one-cluster partition is
    returned. This is what creates the ensemble-size resolution limit: for
    small ensembles the significance quantiles clamp at zero and even zero
    co-classification stops counting as evidence of separation.

    Raises
    ------
    ConvergenceError
        When C is still fractional after ``max_iter`` rounds; the partition
        of the last round is attached.
    """
    if not 0 < alpha < 1:
        raise DomainError("alpha must be in (0, 1)")
    if node_subset is not None:
        ensemble = ensemble.restrict(node_subset)
    ss = as_seed_sequence(seed)
    l = ensemble.size
    n = ensemble.n
    off_diag = ~np.eye(n, dtype=bool)
    last = None
    for it in range(max_iter):
        counts = coclass_counts(ensemble)
        agreed = _binary_partition(counts, l)
        if agreed is not None:
            return agreed
        b = counts / l - consensus_null_matrix(ensemble, alpha)
        b = (b + b.T) / 2.0
        if not np.any(b[off_diag] < 0.0):
            return Partition.all_in_one(n)
        parts = optimize_many(QualityProblem(b), l, child(ss, it),
                              workers=workers)
        ensemble = PartitionEnsemble(tuple(parts))
        last = parts[0]
    raise ConvergenceError(
        f"co-classification not binary after {max_iter} consensus rounds",
        best=last)


def lf_consensus(ensemble: PartitionEnsemble, tau: float, clusterer=None,
                 max_iter: int = CONSENSUS_MAX_ITER,
                 seed=0, workers: int = 1) -> Partition:
    """Thresholded-C consensus baseline.

    Entries of C below ``tau`` are zeroed, the thresholded matrix is
    clustered as a weighted graph by ``clusterer`` (default: modularity at
    gamma=1 with the configuration null of the thresholded matrix) with the
    same ensemble size, and the loop repeats until all partitions agree.

    ``clusterer`` maps (thresholded_matrix, seed, count, workers) to a list
    of partitions, so callers control the algorithm and resolution used on
    the co-classification graph.
    """
    if not 0.0 <= tau <= 1.0:
        raise DomainError("tau must be in [0, 1]")
    ss = as_seed_sequence(seed)
    l = ensemble.size
    if clusterer is None:
        clusterer = _modularity_clusterer
    for it in range(max_iter):
        counts = coclass_counts(ensemble)
        agreed = _binary_partition(counts, l)
        if agreed is not None:
            return agreed
        c = counts / l
        c[c < tau] = 0.0
        parts = clusterer(c, child(ss, it), l, workers)
        ensemble = PartitionEnsemble(tuple(parts))
    counts = coclass_counts(ensemble)
    agreed = _binary_partition(counts, l)
    if agreed is not None:
        return agreed
    raise ConvergenceError(
        f"LF consensus did not stabilize after {max_iter} rounds",
        best=ensemble.partitions[0])


def _modularity_clusterer(matrix: np.ndarray, seed, count: int,
                          workers: int) -> list[Partition]:
    """Cluster a nonnegative matrix as a weighted graph at gamma=1."""
    n = matrix.shape[0]
    if matrix.sum() <= 0:
        return [Partition.singletons(n)] * count
    k = matrix.sum(axis=1)
    b = matrix - np.outer(k, k) / k.sum()
    return optimize_many(QualityProblem((b + b.T) / 2.0), count, seed,
                         workers=workers)


# ---------------------------------------------------------------------------
# consensus tree

@dataclass
class TreeNode:
    """One cluster of the consensus hierarchy."""

    id: int
    members: np.ndarray
    strength: float
    parent: int | None = None
    children: list[int] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class ConsensusTree:
    """Rooted hierarchy of clusters annotated with cluster strength."""

    n: int
    nodes: list[TreeNode]

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    def children_of(self, node: TreeNode) -> list[TreeNode]:
        return [self.nodes[i] for i in node.children]

    def leaves(self) -> list[TreeNode]:
        return [nd for nd in self.nodes if nd.is_leaf]

    def depth(self) -> int:
        """Number of edges on the longest root-to-leaf path."""

        def rec(node):
            if node.is_leaf:
                return 0
            return 1 + max(rec(c) for c in self.children_of(node))

        return rec(self.root)

    def leaf_partition(self) -> Partition:
        labels = np.empty(self.n, dtype=np.int64)
        for idx, leaf in enumerate(self.leaves()):
            labels[leaf.members] = idx
        return Partition(labels)

    def coarse_partition(self) -> Partition:
        """Partition given by the root's children (root itself if a leaf)."""
        if self.root.is_leaf:
            return Partition.all_in_one(self.n)
        labels = np.empty(self.n, dtype=np.int64)
        for idx, nd in enumerate(self.children_of(self.root)):
            labels[nd.members] = idx
        return Partition(labels)


def _mean_coclass(c: np.ndarray, members: np.ndarray) -> float:
    """Mean of C over ordered member pairs i != j; 1.0 for singletons."""
    m = members.size
    if m < 2:
        return 1.0
    block = c[np.ix_(members, members)]
    return float((block.sum() - np.trace(block)) / (m * (m - 1)))


def hierarchical_consensus(ensemble: PartitionEnsemble, alpha: float, seed,
                           workers: int = 1,
                           max_iter: int = CONSENSUS_MAX_ITER
                           ) -> ConsensusTree:
    """Recursive consensus clustering at significance level alpha.

    Starting from all nodes in one cluster, each cluster is split by
    ``consensus_partition`` restricted to its members (null probabilities
    recomputed on the restriction); a cluster becomes a leaf when no
    significant sub-structure is found or it is a singleton. Recursion is
    depth-first by smallest member id; every node's strength is the mean of
    the original co-classification matrix over its member pairs.
    """
    if not 0 < alpha < 1:
        raise DomainError("alpha must be in (0, 1)")
    ss = as_seed_sequence(seed)
    n = ensemble.n
    c_full = coclassification(ensemble)
    all_nodes = np.arange(n)
    tree = ConsensusTree(n=n, nodes=[])
    tree.nodes.append(TreeNode(id=0, members=all_nodes,
                               strength=_mean_coclass(c_full, all_nodes)))
    # each recursion owns a derived seed; children spawn in cluster order
    stack = [(0, as_seed_sequence(child(ss, 0)))]
    while stack:
        node_id, node_ss = stack.pop()
        node = tree.nodes[node_id]
        if node.members.size < 2:
            continue
        part = consensus_partition(ensemble, alpha, child(node_ss, 0),
                                   node_subset=node.members,
                                   workers=workers, max_iter=max_iter)
        if part.is_trivial():
            continue
        sub_stack = []
        for idx, local_members in enumerate(part.clusters()):
            members = node.members[local_members]
            new = TreeNode(id=len(tree.nodes), members=members,
                           strength=_mean_coclass(c_full, members),
                           parent=node_id)
            tree.nodes.append(new)
            node.children.append(new.id)
            sub_stack.append((new.id, as_seed_sequence(child(node_ss,
                                                             idx + 1))))
        # depth-first by smallest member id
        sub_stack.sort(key=lambda item: int(tree.nodes[item[0]].members[0]),
                       reverse=True)
        stack.extend(sub_stack)
    return tree


# ---------------------------------------------------------------------------
# dendrogram cuts

def _split_strength(tree: ConsensusTree, node: TreeNode) -> float:
    """Strength at which a cluster splits: the weakest cluster the split
    creates."""
    return min(c.strength for c in tree.children_of(node))


def cut_tree(tree: ConsensusTree, strength_threshold: float) -> Partition:
    """Partition obtained by splitting only where every resulting cluster
    has strength at least the threshold.

    Descends from the root (which always splits when it has children); a
    cluster is kept whole when its split would create a cluster weaker
    than the threshold. Thresholds above all strengths therefore yield the
    coarsest non-root partition and thresholds below all strengths the
    leaf partition.
    """
    if tree.root.is_leaf:
        return Partition.all_in_one(tree.n)
    labels = np.empty(tree.n, dtype=np.int64)
    next_label = 0

    def emit(node):
        nonlocal next_label
        labels[node.members] = next_label
        next_label += 1

    def expand(node):
        for ch in tree.children_of(node):
            if ch.is_leaf or _split_strength(tree, ch) < strength_threshold:
                emit(ch)
            else:
                expand(ch)

    expand(tree.root)
    return Partition(labels)


def all_cuts(tree: ConsensusTree) -> list[tuple[float, Partition]]:
    """cut_tree at every distinct strength plus the leaf partition,
    deduplicated; ordered coarse to fine."""
    strengths = sorted({nd.strength for nd in tree.nodes}, reverse=True)
    out: list[tuple[float, Partition]] = []
    for s in strengths:
        part = cut_tree(tree, s)
        if not out or part != out[-1][1]:
            out.append((s, part))
    leaf = tree.leaf_partition()
    if not out or leaf != out[-1][1]:
        out.append((min(strengths, default=0.0), leaf))
    return out


# ---------------------------------------------------------------------------
# serialization

TREE_FORMAT_VERSION = 1


def tree_to_json(tree: ConsensusTree) -> dict:
    return {
        "format": "consensus-tree",
        "version": TREE_FORMAT_VERSION,
        "n": tree.n,
        "nodes": [
            {
                "id": nd.id,
                "parent": nd.parent,
                "members": [int(m) for m in nd.members],
                "children": list(nd.children),
                "strength": nd.strength,
            }
            for nd in tree.nodes
        ],
    }


def tree_from_json(doc: dict) -> ConsensusTree:
    if doc.get("format") != "consensus-tree":
        raise DomainError("not a consensus-tree document")
    if doc.get("version") != TREE_FORMAT_VERSION:
        raise DomainError(f"unsupported tree version {doc.get('version')}")
    nodes = [
        TreeNode(id=nd["id"], members=np.array(nd["members"], dtype=np.int64),
                 strength=float(nd["strength"]), parent=nd["parent"],
                 children=list(nd["children"]))
        for nd in doc["nodes"]
    ]
    return ConsensusTree(n=int(doc["n"]), nodes=nodes)


def write_tree_json(tree: ConsensusTree, path) -> None:
    with open(path, "w") as fh:
        json.dump(tree_to_json(tree), fh, indent=1)
        fh.write("\n")


def read_tree_json(path) -> ConsensusTree:
    with open(path) as fh:
        return tree_from_json(json.load(fh))


def write_tree_clusters_csv(tree: ConsensusTree, path) -> None:
    """Flat (node_id, leaf_cluster, coarse_cluster) table for quick joins."""
    leaf = tree.leaf_partition().assignments
    coarse = tree.coarse_partition().assignments
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node_id", "leaf_cluster", "coarse_cluster"])
        for i in range(tree.n):
            writer.writerow([i, int(leaf[i]), int(coarse[i])])
