"""Partition ensembles, co-classification statistics and partition nulls.

An ensemble is an ordered list of partitions of one node set, typically
obtained by optimizing modularity at different resolutions. Its
co-classification matrix

    C_ij = (1/l) sum_t delta(g_i(t), g_j(t))

is computed as (1/l) G G^T with G the sparse node-cluster indicator of the
ensemble, so entries are exact multiples of 1/l.

Under a partition null model the C_ij are rescaled Poisson-Binomial means
of independent Bernoulli trials with per-partition probabilities p0_ij(t);
the permutation model fixes cluster counts/sizes and shuffles all nodes,

    p_ij = sum_c (s_c / n) ((s_c - 1) / (n - 1)),

while the local permutation model keeps node i fixed and randomizes j,

    p_ij = (s_{g_i} - 1) / (n - 1),

which depends on i only and is asymmetric in (i, j). Significance
thresholds are alpha-quantiles of the null mean, by default via the
asymptotic normal approximation.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.special import ndtri

from .errors import DomainError
from .graph import Graph
from .modularity import Partition, QualityProblem, iterated_louvain
from .seeding import rng_from, spawn


@dataclass(frozen=True)
class PartitionEnsemble:
    """Ordered collection of partitions over a shared node set."""

    partitions: tuple[Partition, ...]
    gammas: np.ndarray | None = None

    def __post_init__(self):
        parts = tuple(self.partitions)
        if len(parts) < 1:
            raise DomainError("ensemble needs at least one partition")
        n = parts[0].n
        if any(p.n != n for p in parts):
            raise DomainError("all partitions must cover the same node set")
        if self.gammas is not None:
            g = np.asarray(self.gammas, dtype=float)
            if g.size != len(parts):
                raise DomainError("one gamma per partition required")
            object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "partitions", parts)

    @property
    def size(self) -> int:
        return len(self.partitions)

    @property
    def n(self) -> int:
        return self.partitions[0].n

    def labels_matrix(self) -> np.ndarray:
        """(l, n) array of cluster labels, one row per partition."""
        return np.stack([p.assignments for p in self.partitions])

    def restrict(self, nodes) -> "PartitionEnsemble":
        """Ensemble induced on a node subset (cluster sizes recomputed)."""
        nodes = np.asarray(nodes, dtype=np.int64)
        return PartitionEnsemble(
            tuple(p.restrict(nodes) for p in self.partitions),
            gammas=self.gammas)


# ---------------------------------------------------------------------------
# ensemble generation

_POOL_GRAPH = None
_POOL_MATRIX = None


def _pool_init_graph(adjacency, strengths, total_weight):
    global _POOL_GRAPH
    _POOL_GRAPH = (adjacency, strengths, total_weight)


def _pool_run_gamma(task):
    gamma, seed = task
    a, k, two_m = _POOL_GRAPH
    b = a - gamma * np.outer(k, k) / two_m
    return iterated_louvain(QualityProblem(b), seed).assignments


def _pool_init_matrix(matrix):
    global _POOL_MATRIX
    _POOL_MATRIX = QualityProblem(matrix)


def _pool_run_seed(seed):
    return iterated_louvain(_POOL_MATRIX, seed).assignments


def generate_ensemble(graph: Graph, gammas, seed, workers: int = 1
                      ) -> PartitionEnsemble:
    """Optimize modularity once per gamma value.

    Each partition gets its own seed derived from ``seed`` by index, so the
    result is identical for any ``workers`` count and partitions line up
    with the input gamma order.
    """
    gammas = np.asarray(list(gammas), dtype=float)
    if gammas.size == 0:
        raise DomainError("gammas must be non-empty")
    seeds = spawn(seed, gammas.size)
    a = graph.adjacency()
    k = graph.strengths
    two_m = graph.total_weight
    if two_m <= 0:
        raise DomainError("graph has no edges")
    tasks = list(zip(gammas, seeds))
    if workers > 1 and gammas.size > 1:
        with ProcessPoolExecutor(
                max_workers=workers, initializer=_pool_init_graph,
                initargs=(a, k, two_m)) as pool:
            chunk = max(1, gammas.size // (workers * 4))
            labels = list(pool.map(_pool_run_gamma, tasks, chunksize=chunk))
    else:
        _pool_init_graph(a, k, two_m)
        labels = [_pool_run_gamma(t) for t in tasks]
    return PartitionEnsemble(tuple(Partition(lab) for lab in labels),
                             gammas=gammas)


def optimize_many(problem: QualityProblem, count: int, seed,
                  workers: int = 1) -> list[Partition]:
    """``count`` independent optimizer runs on one shared problem."""
    if count < 1:
        raise DomainError("count must be >= 1")
    seeds = spawn(seed, count)
    if workers > 1 and count > 1:
        with ProcessPoolExecutor(
                max_workers=workers, initializer=_pool_init_matrix,
                initargs=(problem.matrix,)) as pool:
            chunk = max(1, count // (workers * 4))
            labels = list(pool.map(_pool_run_seed, seeds, chunksize=chunk))
    else:
        labels = [iterated_louvain(problem, s).assignments for s in seeds]
    return [Partition(lab) for lab in labels]


# ---------------------------------------------------------------------------
# co-classification

def coclass_counts(ensemble: PartitionEnsemble) -> np.ndarray:
    """Integer pair counts sum_t delta(g_i(t), g_j(t)) via sparse G G^T."""
    n, l = ensemble.n, ensemble.size
    offsets = np.cumsum([0] + [p.num_clusters for p in ensemble.partitions])
    rows = np.tile(np.arange(n), l)
    cols = np.concatenate([p.assignments + offsets[t]
                           for t, p in enumerate(ensemble.partitions)])
    g = sp.csr_matrix((np.ones(n * l), (rows, cols)),
                      shape=(n, offsets[-1]))
    counts = (g @ g.T).toarray()
    return np.rint(counts).astype(np.int64)


def coclassification(ensemble: PartitionEnsemble) -> np.ndarray:
    """C = (1/l) G G^T; symmetric, unit diagonal, entries multiples of 1/l."""
    return coclass_counts(ensemble) / ensemble.size


# ---------------------------------------------------------------------------
# partition null models

def null_prob_permutation(partition: Partition) -> float:
    """Same-cluster probability of any pair i != j when all node labels are
    shuffled with cluster count and sizes fixed."""
    n = partition.n
    if n < 2:
        raise DomainError("permutation null needs n >= 2")
    s = partition.cluster_sizes
    return float(np.sum((s / n) * ((s - 1) / (n - 1))))


def null_prob_local(partition: Partition, i: int) -> float:
    """Probability that a random j lands in i's cluster when only j moves;
    depends on i's cluster size only."""
    n = partition.n
    if n < 2:
        raise DomainError("local permutation null needs n >= 2")
    size = partition.cluster_sizes[partition.assignments[i]]
    return float((size - 1) / (n - 1))


def _local_prob_vectors(ensemble: PartitionEnsemble) -> np.ndarray:
    """(l, n) array of p_ij(t) under the local model; column i holds the
    probability with node i's assignment fixed."""
    n = ensemble.n
    if n < 2:
        raise DomainError("local permutation null needs n >= 2")
    out = np.empty((ensemble.size, n))
    for t, p in enumerate(ensemble.partitions):
        out[t] = (p.cluster_sizes[p.assignments] - 1) / (n - 1)
    return out


def null_moments(ensemble: PartitionEnsemble, kind: str = "local_permutation",
                 node_subset=None) -> tuple[np.ndarray, np.ndarray]:
    """Mean and variance matrices of C under a partition null model.

    mu_ij = (1/l) sum_t p0_ij(t) and
    sigma2_ij = (1/l^2) sum_t (p0_ij(t) - p0_ij(t)^2).

    With ``node_subset`` the partitions are first restricted to the subset
    and cluster sizes recomputed within it, which is how the hierarchical
    procedure recurses. For the local model the matrices are asymmetric
    (row i carries the i-fixed orientation); diagonals are mu=1, sigma2=0.
    """
    if node_subset is not None:
        ensemble = ensemble.restrict(node_subset)
    n, l = ensemble.n, ensemble.size
    if kind == "permutation":
        probs = np.array([null_prob_permutation(p)
                          for p in ensemble.partitions])
        mu_off = float(probs.mean())
        var_off = float(np.sum(probs - probs ** 2) / l ** 2)
        mu = np.full((n, n), mu_off)
        sigma2 = np.full((n, n), var_off)
    elif kind == "local_permutation":
        probs = _local_prob_vectors(ensemble)
        mu_i = probs.mean(axis=0)
        var_i = np.sum(probs - probs ** 2, axis=0) / l ** 2
        mu = np.repeat(mu_i[:, None], n, axis=1)
        sigma2 = np.repeat(var_i[:, None], n, axis=1)
    else:
        raise DomainError(f"unknown null model {kind!r}")
    np.fill_diagonal(mu, 1.0)
    np.fill_diagonal(sigma2, 0.0)
    return mu, sigma2


@dataclass(frozen=True)
class CoclassStats:
    """Co-classification matrix bundled with its null-model moments."""

    C: np.ndarray
    mu: np.ndarray
    sigma2: np.ndarray
    null_kind: str


def coclass_stats(ensemble: PartitionEnsemble,
                  kind: str = "local_permutation",
                  node_subset=None) -> CoclassStats:
    if node_subset is not None:
        ensemble = ensemble.restrict(node_subset)
    mu, sigma2 = null_moments(ensemble, kind)
    return CoclassStats(C=coclassification(ensemble), mu=mu, sigma2=sigma2,
                        null_kind=kind)


# ---------------------------------------------------------------------------
# significance

def significance_threshold(mu: float, sigma2: float, alpha: float,
                           method: str = "normal", probs=None,
                           trials: int = 10000, seed=None) -> float:
    """p with Pr(C0_ij <= p) = alpha for one orientation of one pair.

    ``normal`` uses the asymptotic approximation mu + ndtri(alpha) * sigma;
    ``montecarlo`` takes the empirical alpha-quantile of ``trials``
    simulated Poisson-Binomial means and requires the per-partition
    Bernoulli probabilities in ``probs``. Results are clamped to [0, 1].
    """
    if not 0 < alpha < 1:
        raise DomainError("alpha must be in (0, 1)")
    if sigma2 < 0:
        raise DomainError("variance must be nonnegative")
    if method == "normal":
        p = mu + ndtri(alpha) * np.sqrt(sigma2)
    elif method == "montecarlo":
        if probs is None:
            raise DomainError(
                "montecarlo method needs the per-partition probabilities")
        probs = np.asarray(probs, dtype=float)
        rng = rng_from(seed if seed is not None else 0)
        draws = (rng.random((trials, probs.size)) < probs).mean(axis=1)
        p = float(np.quantile(draws, alpha))
    else:
        raise DomainError(f"unknown significance method {method!r}")
    return float(min(max(p, 0.0), 1.0))


def consensus_null_matrix(ensemble: PartitionEnsemble, alpha: float,
                          node_subset=None, method: str = "normal",
                          trials: int = 10000, seed=None) -> np.ndarray:
    """Null matrix of significance quantiles under the local permutation
    model, symmetrized over pair orientations.

    The level-alpha quantile p of a pair solves
    max{Pr[C0_ij <= p], Pr[C0_ji <= p]} = alpha, which is the smaller of
    the two per-orientation alpha-quantiles: co-classification counts as
    significantly depleted only when both orientations agree. Entries clamp
    to [0, 1] and the diagonal is 1.
    """
    if not 0 < alpha < 1:
        raise DomainError("alpha must be in (0, 1)")
    if node_subset is not None:
        ensemble = ensemble.restrict(node_subset)
    n, l = ensemble.n, ensemble.size
    probs = _local_prob_vectors(ensemble)
    if method == "normal":
        mu_i = probs.mean(axis=0)
        sd_i = np.sqrt(np.sum(probs - probs ** 2, axis=0)) / l
        q = mu_i + ndtri(alpha) * sd_i
    elif method == "montecarlo":
        rng = rng_from(seed if seed is not None else 0)
        q = np.empty(n)
        for i in range(n):
            draws = (rng.random((trials, l)) < probs[:, i]).mean(axis=1)
            q[i] = np.quantile(draws, alpha)
    else:
        raise DomainError(f"unknown significance method {method!r}")
    q = np.clip(q, 0.0, 1.0)
    out = np.minimum.outer(q, q)
    np.fill_diagonal(out, 1.0)
    return out


# ---------------------------------------------------------------------------
# serialization

def write_ensemble_csv(ensemble: PartitionEnsemble, path) -> None:
    """One row per node, one column per partition; the header row carries
    gamma values when available, otherwise generic column names."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if ensemble.gammas is not None:
            writer.writerow([repr(float(g)) for g in ensemble.gammas])
        else:
            writer.writerow([f"p{t}" for t in range(ensemble.size)])
        for row in ensemble.labels_matrix().T:
            writer.writerow([int(x) for x in row])


def read_ensemble_csv(path) -> PartitionEnsemble:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DomainError(f"empty ensemble file {path}") from None
        try:
            gammas = np.array([float(x) for x in header])
        except ValueError:
            gammas = None
        rows = [[int(x) for x in row] for row in reader if row]
    if not rows:
        raise DomainError(f"no node rows in ensemble file {path}")
    labels = np.array(rows, dtype=np.int64).T
    parts = tuple(Partition(lab) for lab in labels)
    return PartitionEnsemble(parts, gammas=gammas)


def write_coclassification(c: np.ndarray, path, fmt: str = "csv") -> None:
    """Export C as CSV or as raw little-endian float64 row-major binary
    prefixed with an 8-byte little-endian node count."""
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            for row in c:
                writer.writerow([repr(float(x)) for x in row])
    elif fmt == "bin":
        with open(path, "wb") as fh:
            fh.write(np.array(c.shape[0], dtype="<u8").tobytes())
            fh.write(np.ascontiguousarray(c, dtype="<f8").tobytes())
    else:
        raise DomainError(f"unknown coclassification format {fmt!r}")


def read_coclassification(path, fmt: str = "csv") -> np.ndarray:
    if fmt == "csv":
        with open(path, newline="") as fh:
            return np.array([[float(x) for x in row]
                             for row in csv.reader(fh) if row])
    if fmt == "bin":
        with open(path, "rb") as fh:
            n = int(np.frombuffer(fh.read(8), dtype="<u8")[0])
            data = np.frombuffer(fh.read(), dtype="<f8")
        return data.reshape(n, n).copy()
    raise DomainError(f"unknown coclassification format {fmt!r}")
