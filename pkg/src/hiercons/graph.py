"""Weighted undirected graphs: construction, edge-list ingestion, config null.

Graphs are stored symmetrized. Node strengths count a self-loop of weight w
once (k_i = sum_j A_ij with A_ii = w), and the total weight is 2m = sum_i k_i.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EdgeListParseError

# Relative accumulation tolerance for strength/total-weight consistency.
WEIGHT_RTOL = 1e-9


@dataclass(frozen=True)
class Graph:
    """Weighted undirected graph over nodes 0..n-1.

    Parameters
    ----------
    n : int
        Number of nodes.
    edge_i, edge_j : ndarray of int
        Endpoints of unique undirected edges with ``edge_i <= edge_j``.
        Self-loops appear as ``edge_i == edge_j``.
    edge_w : ndarray of float
        Positive edge weights, duplicates already summed.
    id_map : dict, optional
        Original node id -> internal id, when the graph was read from a file.

    Notes
    -----
    Immutable after construction and safe for concurrent shared reads.
    """

    n: int
    edge_i: np.ndarray
    edge_j: np.ndarray
    edge_w: np.ndarray
    id_map: dict | None = None
    strengths: np.ndarray = field(init=False, repr=False)
    total_weight: float = field(init=False)
    self_loop_weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n <= 0:
            raise DomainError("graph must have at least one node")
        if np.any(self.edge_w < 0):
            raise DomainError("edge weights must be nonnegative")
        if np.any(self.edge_i > self.edge_j):
            raise ValueError("edges must be stored with edge_i <= edge_j")
        k = np.zeros(self.n)
        loops = np.zeros(self.n)
        np.add.at(k, self.edge_i, self.edge_w)
        off = self.edge_i != self.edge_j
        np.add.at(k, self.edge_j[off], self.edge_w[off])
        np.add.at(loops, self.edge_i[~off], self.edge_w[~off])
        total = float(k.sum())
        object.__setattr__(self, "strengths", k)
        object.__setattr__(self, "total_weight", total)
        object.__setattr__(self, "self_loop_weights", loops)

    @property
    def num_edges(self) -> int:
        return len(self.edge_w)

    def adjacency(self) -> np.ndarray:
        """Dense symmetric adjacency matrix (diagonal = self-loop weights)."""
        a = np.zeros((self.n, self.n))
        a[self.edge_i, self.edge_j] = self.edge_w
        a[self.edge_j, self.edge_i] = self.edge_w
        return a

    @classmethod
    def from_edges(cls, n: int, edges, id_map=None) -> "Graph":
        """Build a graph from an iterable of (i, j, w) with 0 <= i, j < n.

        Edges are symmetrized to canonical (min, max) order and duplicate
        pairs have their weights summed.
        """
        acc: dict[tuple[int, int], float] = {}
        for i, j, w in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise DomainError(f"edge ({i}, {j}) outside node range 0..{n - 1}")
            if w < 0:
                raise DomainError(f"negative weight {w} on edge ({i}, {j})")
            key = (i, j) if i <= j else (j, i)
            acc[key] = acc.get(key, 0.0) + float(w)
        if acc:
            keys = sorted(acc)
            ei = np.array([k[0] for k in keys], dtype=np.int64)
            ej = np.array([k[1] for k in keys], dtype=np.int64)
            ew = np.array([acc[k] for k in keys])
        else:
            ei = np.empty(0, dtype=np.int64)
            ej = np.empty(0, dtype=np.int64)
            ew = np.empty(0)
        return cls(n=n, edge_i=ei, edge_j=ej, edge_w=ew, id_map=id_map)


def load_edge_list(path, directed_policy: str = "symmetrize") -> Graph:
    """Read a whitespace-separated edge list ``src dst [weight]``.

    Node ids may be arbitrary strings; an id map to internal ids 0..n-1 is
    built in order of first appearance and stored on the returned graph.
    A missing weight means 1.0. Duplicate directed edges have their weights
    summed.

    Parameters
    ----------
    path : str or Path
        File to read.
    directed_policy : {"symmetrize", "reject"}
        ``symmetrize`` stores A_ij <- input A_ij + input A_ji, so a pair
        listed in both orientations ends up with the summed weight.
        ``reject`` raises if any pair appears in both orientations.

    Raises
    ------
    EdgeListParseError
        Malformed line (carries the 1-based line number) or empty input.
    DomainError
        Negative weight, or directed input under the ``reject`` policy.
    """
    if directed_policy not in ("symmetrize", "reject"):
        raise DomainError(f"unknown directed_policy {directed_policy!r}")
    id_map: dict[str, int] = {}
    directed: dict[tuple[int, int], float] = {}
    loops: dict[int, float] = {}

    def intern(token: str) -> int:
        if token not in id_map:
            id_map[token] = len(id_map)
        return id_map[token]

    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise EdgeListParseError(
                    f"expected 'src dst [weight]', got {line!r}", lineno)
            src, dst = intern(parts[0]), intern(parts[1])
            if len(parts) == 3:
                try:
                    w = float(parts[2])
                except ValueError:
                    raise EdgeListParseError(
                        f"bad weight {parts[2]!r}", lineno) from None
            else:
                w = 1.0
            if not np.isfinite(w):
                raise EdgeListParseError(f"non-finite weight {w}", lineno)
            if w < 0:
                raise DomainError(
                    f"line {lineno}: negative weight {w} not allowed")
            if src == dst:
                loops[src] = loops.get(src, 0.0) + w
            else:
                directed[(src, dst)] = directed.get((src, dst), 0.0) + w

    if not directed and not loops:
        raise EdgeListParseError("no edges")

    undirected: dict[tuple[int, int], float] = {}
    for (i, j), w in directed.items():
        if directed_policy == "reject" and (j, i) in directed:
            raise DomainError(
                f"directed input: pair ({i}, {j}) appears in both orientations "
                "(use directed_policy='symmetrize')")
        key = (i, j) if i < j else (j, i)
        undirected[key] = undirected.get(key, 0.0) + w
    for i, w in loops.items():
        undirected[(i, i)] = undirected.get((i, i), 0.0) + w

    n = len(id_map)
    edges = [(i, j, w) for (i, j), w in undirected.items()]
    return Graph.from_edges(n, edges, id_map=dict(id_map))


def write_edge_list(graph: Graph, path) -> None:
    """Write the graph as ``i j w`` lines using internal node ids."""
    with open(path, "w") as fh:
        for i, j, w in zip(graph.edge_i, graph.edge_j, graph.edge_w):
            fh.write(f"{int(i)} {int(j)} {float(w)!r}\n")


def write_id_map(graph: Graph, path) -> None:
    """Emit the original-id -> internal-id map as a two-column CSV."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["original_id", "internal_id"])
        mapping = graph.id_map or {str(i): i for i in range(graph.n)}
        for orig, internal in mapping.items():
            writer.writerow([orig, internal])


def config_null_matrix(graph: Graph) -> np.ndarray:
    """Expected adjacency under the configuration model, P_ij = k_i k_j / 2m.

    The diagonal is included; the matrix sums to 2m.
    """
    if graph.total_weight <= 0:
        raise DomainError("configuration null model needs total weight > 0")
    k = graph.strengths
    return np.outer(k, k) / graph.total_weight
