"""Two-level hierarchical benchmark networks with planted partitions.

The generator plants a two-level hierarchy by recursive splitting: each
cluster draws a child count from Poisson(4) truncated to >= 2, child
probabilities from a symmetric Dirichlet(1.5), and assigns members i.i.d.
Edges follow a degree-corrected block model: target degrees are drawn from
a discrete power law with exponent 2 on [5, 70]; each of m = round(sum k/2)
edges independently picks a level (probabilities p0, p1, p2) and lands
uniformly-by-degree either anywhere (level 0), inside a level-1 block, or
inside a level-2 block, with blocks chosen proportionally to their total
degree. Self-loops and duplicate pairs are re-drawn up to a cap and then
folded in as weight.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .graph import Graph
from .modularity import Partition
from .seeding import rng_from, spawn

REJECTION_CAP = 10 ** 6
RESAMPLE_TRIES = 100


@dataclass(frozen=True)
class HierBenchmarkSpec:
    """Parameters of the two-level hierarchical benchmark."""

    n: int
    p: tuple[float, float, float]
    degree_exponent: float = 2.0
    k_min: int = 5
    k_max: int = 70
    child_mean: float = 4.0
    child_cutoff: int = 2
    dirichlet_sigma: float = 1.5
    seed: int = 0

    def __post_init__(self):
        p = tuple(float(x) for x in self.p)
        if len(p) != 3 or any(x < 0 for x in p):
            raise DomainError("p must be three nonnegative fractions")
        if abs(sum(p) - 1.0) > 1e-12:
            raise DomainError(f"p must sum to 1, got {sum(p)}")
        if self.k_min < 1 or self.k_max < self.k_min:
            raise DomainError("need 1 <= k_min <= k_max")
        if self.n < 4:
            raise DomainError("benchmark needs n >= 4")
        object.__setattr__(self, "p", p)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1)

    @classmethod
    def from_json(cls, text: str) -> "HierBenchmarkSpec":
        doc = json.loads(text)
        doc["p"] = tuple(doc["p"])
        return cls(**doc)


@dataclass(frozen=True)
class PlantedHierarchy:
    """Nested ground-truth partitions; level2 refines level1."""

    level1: Partition
    level2: Partition

    def __post_init__(self):
        g1, g2 = self.level1, self.level2
        if g1.n != g2.n:
            raise DomainError("levels must cover the same nodes")
        for members in g2.clusters():
            if np.unique(g1.assignments[members]).size != 1:
                raise DomainError("level2 must refine level1")
        for members in g1.clusters():
            if np.unique(g2.assignments[members]).size < 2:
                raise DomainError(
                    "every level-1 cluster needs >= 2 level-2 children")


def _split_cluster(size: int, spec: HierBenchmarkSpec,
                   rng: np.random.Generator, budget: list[int],
                   min_child_size: int = 1) -> np.ndarray:
    """Child labels for one cluster; redrawn in full whenever the i.i.d.
    assignment collapses to a single non-empty child (or leaves a child
    below ``min_child_size``)."""
    if size < 2:
        raise ConvergenceError(
            "cannot split a singleton cluster into >= 2 children")
    while True:
        if budget[0] <= 0:
            raise ConvergenceError(
                f"hierarchy sampling exceeded {REJECTION_CAP} draws")
        budget[0] -= 1
        c = rng.poisson(spec.child_mean)
        if c < spec.child_cutoff:
            continue
        probs = rng.dirichlet(np.full(c, spec.dirichlet_sigma))
        labels = rng.choice(c, size=size, p=probs)
        kept = np.bincount(labels, minlength=c)
        kept = kept[kept > 0]
        if kept.size >= 2 and kept.min() >= min_child_size:
            return labels


def sample_hierarchy(spec: HierBenchmarkSpec) -> PlantedHierarchy:
    """Draw the planted two-level hierarchy (empty children are dropped).

    The level-1 split redraws until every child has at least two members,
    so that each level-1 cluster can itself be split.
    """
    rng = rng_from(spawn(spec.seed, 2)[0])
    budget = [REJECTION_CAP]
    g1 = Partition(_split_cluster(spec.n, spec, rng, budget,
                                  min_child_size=2))
    g2_labels = np.empty(spec.n, dtype=np.int64)
    nxt = 0
    for members in g1.clusters():
        sub = Partition(_split_cluster(members.size, spec, rng, budget))
        g2_labels[members] = sub.assignments + nxt
        nxt += sub.num_clusters
    return PlantedHierarchy(level1=g1, level2=Partition(g2_labels))


def _power_law_degrees(spec: HierBenchmarkSpec,
                       rng: np.random.Generator) -> np.ndarray:
    """Discrete power law k^(-exponent) on [k_min, k_max] via inverse CDF."""
    support = np.arange(spec.k_min, spec.k_max + 1)
    weights = support.astype(float) ** (-spec.degree_exponent)
    return rng.choice(support, size=spec.n, p=weights / weights.sum())


def _generate_edges(spec: HierBenchmarkSpec, hierarchy: PlantedHierarchy,
                    rng: np.random.Generator):
    """Endpoint pairs, per-edge levels and target degrees.

    Endpoint draws are proportional to target degree globally (level 0) or
    within a degree-weighted random block (levels 1 and 2). Returns
    (i, j, level, degrees) before self-loop/multi-edge cleanup.
    """
    k = _power_law_degrees(spec, rng).astype(float)
    m = int(round(k.sum() / 2.0))
    levels = rng.choice(3, size=m, p=np.asarray(spec.p))
    i_out = np.empty(m, dtype=np.int64)
    j_out = np.empty(m, dtype=np.int64)

    global_p = k / k.sum()
    block_info = {}
    for level, partition in ((1, hierarchy.level1), (2, hierarchy.level2)):
        clusters = partition.clusters()
        totals = np.array([k[c].sum() for c in clusters])
        block_info[level] = (clusters, totals / totals.sum())

    for level in (0, 1, 2):
        idx = np.flatnonzero(levels == level)
        if idx.size == 0:
            continue
        if level == 0:
            i_out[idx] = rng.choice(spec.n, size=idx.size, p=global_p)
            j_out[idx] = rng.choice(spec.n, size=idx.size, p=global_p)
            continue
        clusters, block_p = block_info[level]
        usable = np.array([c.size >= 2 for c in clusters])
        if not usable.any():
            raise DomainError("no block with >= 2 nodes for internal edges")
        # blocks of a single node cannot host an internal edge: resample
        block_p = np.where(usable, block_p, 0.0)
        block_p = block_p / block_p.sum()
        blocks = rng.choice(len(clusters), size=idx.size, p=block_p)
        for b in np.unique(blocks):
            members = clusters[b]
            local_p = k[members] / k[members].sum()
            sel = idx[blocks == b]
            i_out[sel] = rng.choice(members, size=sel.size, p=local_p)
            j_out[sel] = rng.choice(members, size=sel.size, p=local_p)
    _attach_isolated(i_out, j_out, levels, hierarchy, spec, rng)
    return i_out, j_out, levels, k


def _attach_isolated(i_out, j_out, levels, hierarchy, spec, rng):
    """Give each endpoint-starved node one edge end.

    Independent endpoint draws occasionally miss a node entirely, which
    would leave it with zero strength and no community affiliation. Such a
    node takes over one endpoint of an edge compatible with its own blocks,
    keeping the edge count, level fractions and block constraints intact.
    Best effort: a node whose blocks received no edges at all (possible for
    singleton blocks under extreme level fractions) stays isolated.
    """
    counts = np.bincount(np.concatenate([i_out, j_out]), minlength=spec.n)
    missing = np.flatnonzero(counts == 0)
    if missing.size == 0:
        return
    b1 = hierarchy.level1.assignments
    b2 = hierarchy.level2.assignments
    for v in missing:
        ok = (levels == 0)
        ok |= (levels == 1) & (b1[i_out] == b1[v])
        ok |= (levels == 2) & (b2[i_out] == b2[v])
        for e in rng.permutation(np.flatnonzero(ok)):
            side = int(rng.integers(2))
            arr, other = (i_out, j_out) if side == 0 else (j_out, i_out)
            old = arr[e]
            # keep the displaced node attached and avoid a forced self-loop
            if counts[old] < 2 or other[e] == v:
                continue
            arr[e] = v
            counts[old] -= 1
            counts[v] += 1
            break


def _dedupe_edges(i: np.ndarray, j: np.ndarray, levels: np.ndarray,
                  k: np.ndarray, hierarchy: PlantedHierarchy,
                  spec: HierBenchmarkSpec, rng: np.random.Generator):
    """Re-draw self-loops and duplicate pairs within their original block,
    up to RESAMPLE_TRIES each; survivors fold into edge weight."""
    level_members = {0: np.arange(spec.n)}
    blocks1 = hierarchy.level1.assignments
    blocks2 = hierarchy.level2.assignments
    clusters1 = hierarchy.level1.clusters()
    clusters2 = hierarchy.level2.clusters()

    def redraw(e):
        if levels[e] == 0:
            members = level_members[0]
        elif levels[e] == 1:
            members = clusters1[blocks1[i[e]]]
        else:
            members = clusters2[blocks2[i[e]]]
        local_p = k[members] / k[members].sum()
        return (int(rng.choice(members, p=local_p)),
                int(rng.choice(members, p=local_p)))

    seen = set()
    weights: dict[tuple[int, int], float] = {}
    for e in range(i.size):
        a, b = int(i[e]), int(j[e])
        for _ in range(RESAMPLE_TRIES):
            key = (a, b) if a <= b else (b, a)
            if a != b and key not in seen:
                break
            a, b = redraw(e)
        key = (a, b) if a <= b else (b, a)
        if a == b:
            # accepted self-loop: weight 2 keeps sum(k)/2 = m exact
            weights[key] = weights.get(key, 0.0) + 2.0
        else:
            seen.add(key)
            weights[key] = weights.get(key, 0.0) + 1.0
    return weights


def generate_network(spec: HierBenchmarkSpec, hierarchy: PlantedHierarchy,
                     return_levels: bool = False):
    """Sample a benchmark graph for a planted hierarchy.

    With ``return_levels`` the per-edge level assignments are returned as a
    second value (before duplicate folding), for generation diagnostics.
    """
    if hierarchy.level1.n != spec.n:
        raise DomainError("hierarchy does not match spec node count")
    rng = rng_from(spawn(spec.seed, 2)[1])
    i, j, levels, k = _generate_edges(spec, hierarchy, rng)
    weights = _dedupe_edges(i, j, levels, k, hierarchy, spec, rng)
    edges = [(a, b, w) for (a, b), w in sorted(weights.items())]
    graph = Graph.from_edges(spec.n, edges)
    if return_levels:
        return graph, levels
    return graph
