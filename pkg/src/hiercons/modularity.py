"""Multiresolution modularity and its optimizer.

The quality of a partition g of an interaction matrix B is

    Q(g) = sum_ij B_ij * delta(g_i, g_j)

summed over ordered pairs including the diagonal and with no 1/2m
normalization. For graph clustering B = A - gamma * P with P the
configuration null matrix; for consensus clustering B is built from a
co-classification matrix and a significance null (see ``consensus``).

Optimization uses an iterated Louvain scheme with weighted random moves:
phase one moves single nodes, choosing among strictly improving moves at
random with probability proportional to the quality increase; phase two
aggregates communities into supernodes. The whole two-phase algorithm is
restarted from its own output until the quality stops increasing.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .seeding import as_seed_sequence, child, rng_from

# Moves must improve Q by more than this; guards against floating-point
# livelock where a zero-gain move flips sign under round-off.
GAIN_EPS = 1e-10

# Absolute convergence tolerance on Q for the restart loop.
Q_TOL = 1e-10


@dataclass(frozen=True)
class Partition:
    """Cluster assignment vector with canonical labels.

    Labels are canonicalized to 0..k-1 in order of first appearance, so two
    partitions are equal iff their assignment arrays are equal.
    """

    assignments: np.ndarray
    cluster_sizes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        labels = np.asarray(self.assignments, dtype=np.int64)
        if labels.ndim != 1 or labels.size == 0:
            raise DomainError("assignments must be a non-empty 1-d array")
        canonical = _canonicalize(labels)
        object.__setattr__(self, "assignments", canonical)
        object.__setattr__(
            self, "cluster_sizes", np.bincount(canonical))

    @property
    def n(self) -> int:
        return self.assignments.size

    @property
    def num_clusters(self) -> int:
        return self.cluster_sizes.size

    def is_trivial(self) -> bool:
        """True when all nodes share one cluster."""
        return self.num_clusters == 1

    def is_singletons(self) -> bool:
        return self.num_clusters == self.n

    def restrict(self, nodes) -> "Partition":
        """Partition induced on a node subset (labels re-canonicalized)."""
        nodes = np.asarray(nodes, dtype=np.int64)
        return Partition(self.assignments[nodes])

    def clusters(self) -> list[np.ndarray]:
        """Member node ids per cluster, indexed by cluster label."""
        order = np.argsort(self.assignments, kind="stable")
        bounds = np.cumsum(self.cluster_sizes)[:-1]
        return np.split(order, bounds)

    def __eq__(self, other):
        return (isinstance(other, Partition)
                and np.array_equal(self.assignments, other.assignments))

    def __hash__(self):
        return hash(self.assignments.tobytes())

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(np.arange(n))

    @classmethod
    def all_in_one(cls, n: int) -> "Partition":
        return cls(np.zeros(n, dtype=np.int64))


def _canonicalize(labels: np.ndarray) -> np.ndarray:
    """Relabel clusters 0..k-1 by first appearance (smallest node id first)."""
    _, first_pos, inverse = np.unique(
        labels, return_index=True, return_inverse=True)
    rank = np.argsort(np.argsort(first_pos))
    return rank[inverse].astype(np.int64)


@dataclass(frozen=True)
class QualityProblem:
    """Dense symmetric interaction matrix to be clustered."""

    matrix: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.matrix, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise DomainError("interaction matrix must be square")
        if not np.isfinite(b).all():
            raise DomainError("interaction matrix must be finite")
        if not np.allclose(b, b.T, rtol=0, atol=1e-12 * max(1.0, np.abs(b).max())):
            raise DomainError("interaction matrix must be symmetric")
        object.__setattr__(self, "matrix", b)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_graph(cls, graph, gamma: float) -> "QualityProblem":
        """B = A - gamma * P with the configuration null matrix P."""
        from .graph import config_null_matrix

        return cls(graph.adjacency() - gamma * config_null_matrix(graph))


def modularity_score(problem: QualityProblem, partition: Partition) -> float:
    """Q = sum_ij B_ij delta(g_i, g_j), diagonal included, unnormalized."""
    g = partition.assignments
    if g.size != problem.n:
        raise DomainError(
            f"partition covers {g.size} nodes, problem has {problem.n}")
    b = problem.matrix
    total = 0.0
    for members in partition.clusters():
        if members.size == 1:
            total += b[members[0], members[0]]
        else:
            total += b[np.ix_(members, members)].sum()
    return float(total)


def _onehot(labels: np.ndarray) -> np.ndarray:
    k = int(labels.max()) + 1
    out = np.zeros((labels.size, k))
    out[np.arange(labels.size), labels] = 1.0
    return out


def _aggregate(b: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Block-sum B over communities: B'_cd = sum_{i in c, j in d} B_ij."""
    onehot = _onehot(labels)
    return onehot.T @ (b @ onehot)


def _sweep(b: np.ndarray, labels: np.ndarray, sizes: np.ndarray,
           rng: np.random.Generator) -> float:
    """One phase-1 pass over all nodes in random order; mutates labels/sizes.

    Candidate targets for a node are every community plus a fresh singleton
    community; among strictly improving moves one is drawn with probability
    proportional to its quality increase. Returns the total quality gain of
    the accepted moves (0.0 when nothing moved).
    """
    n = labels.size
    gain_total = 0.0
    for v in rng.permutation(n):
        c = labels[v]
        row = b[v]
        comm_sums = np.bincount(labels, weights=row, minlength=n)
        stay = comm_sums[c] - row[v]
        # Gain of moving v into each community (own community excluded via
        # sizes mask below; empty labels would double-count the singleton
        # candidate, so they are masked too).
        delta = 2.0 * (comm_sums - stay)
        occupied = sizes > 0
        occupied[c] = False
        cand = np.flatnonzero(occupied & (delta > GAIN_EPS))
        gains = delta[cand]
        single_gain = -2.0 * stay
        with_single = sizes[c] > 1 and single_gain > GAIN_EPS
        if with_single:
            gains = np.append(gains, single_gain)
        if gains.size == 0:
            continue
        pick = _weighted_pick(gains, rng)
        if with_single and pick == gains.size - 1:
            target = int(np.flatnonzero(sizes == 0)[0])
            gain_total += single_gain
        else:
            target = int(cand[pick])
            gain_total += float(gains[pick])
        sizes[c] -= 1
        sizes[target] += 1
        labels[v] = target
    return gain_total


def _weighted_pick(weights: np.ndarray, rng: np.random.Generator) -> int:
    cum = np.cumsum(weights)
    return int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))


def louvain_once(problem: QualityProblem, seed,
                 init: Partition | None = None) -> Partition:
    """Single run of the two-phase Louvain scheme with weighted random moves.

    Phase one repeatedly sweeps single-node moves until none improves Q;
    phase two aggregates communities into supernodes by block-summing B.
    The phases alternate until a phase-one pass makes no move. Always
    terminates: every move strictly increases Q, which is bounded above.

    Parameters
    ----------
    problem : QualityProblem
    seed : int or numpy.random.SeedSequence
    init : Partition, optional
        Starting partition; defaults to all-singletons.
    """
    rng = rng_from(seed)
    n = problem.n
    if init is not None and init.n != n:
        raise DomainError("init partition size does not match problem")
    node_to_super = np.arange(n)  # original node -> current supernode
    level_b = problem.matrix
    if init is not None:
        level_labels = init.assignments.copy()
        prev_q = modularity_score(problem, init)
    else:
        level_labels = np.arange(n)
        prev_q = float(np.trace(level_b))
    while True:
        sizes = np.bincount(level_labels, minlength=level_labels.size)
        any_move = False
        q = prev_q
        while True:
            gained = _sweep(level_b, level_labels, sizes, rng)
            if gained == 0.0:
                break
            any_move = True
            q += gained
        # moves only ever add strictly positive gains
        assert q >= prev_q, "quality decreased within a phase"
        if not any_move:
            break
        compressed = _canonicalize(level_labels)
        node_to_super = compressed[node_to_super]
        level_b = _aggregate(level_b, compressed)
        # exact quality of the phase-1 result; aggregation preserves it, so
        # the next level starts from this value with singleton supernodes
        q_exact = float(np.trace(level_b))
        scale = 1.0 + abs(q_exact)
        assert q_exact >= prev_q - 1e-8 * scale, \
            "quality decreased across phases"
        assert abs(q_exact - q) <= 1e-6 * scale, \
            "accumulated move gains drifted from recomputed quality"
        prev_q = q_exact
        level_labels = np.arange(level_b.shape[0])
    # supernode index of the final level doubles as the community label
    return Partition(level_labels[node_to_super])


def iterated_louvain(problem: QualityProblem, seed) -> Partition:
    """Louvain restarted from its own output until Q stops increasing.

    Each restart uses the previous communities as the initial partition;
    convergence is declared when the absolute increase in Q drops to
    ``Q_TOL`` or below. Labels of the result are canonical.
    """
    ss = as_seed_sequence(seed)
    part = louvain_once(problem, child(ss, 0))
    q = modularity_score(problem, part)
    i = 1
    while True:
        new = louvain_once(problem, child(ss, i), init=part)
        new_q = modularity_score(problem, new)
        if new_q > q + Q_TOL:
            part, q = new, new_q
            i += 1
        else:
            break
    return part


def write_partition_csv(partition: Partition, path) -> None:
    """Serialize as a single-column CSV of cluster labels by node id."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for label in partition.assignments:
            writer.writerow([int(label)])


def read_partition_csv(path) -> Partition:
    labels = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            labels.append(int(row[0]))
    if not labels:
        raise DomainError(f"no labels in partition file {path}")
    return Partition(np.array(labels, dtype=np.int64))
