"""Resolution-parameter range and sampling strategies.

The meaningful range of the resolution parameter runs from gamma_min (above
which a non-trivial partition first beats the one-cluster partition) to
gamma_max (above which all pairwise interactions are non-positive and the
all-singleton partition is optimal).

Event sampling picks gamma values equally spaced in beta(gamma), the
relative magnitude of antiferromagnetic pair interactions

    beta(gamma) = sum_{(i,j) in E-} |A_ij - gamma P_ij|
                  / sum_{i != j} |A_ij - gamma P_ij|,

where E-(gamma) are the pairs with negative interaction. beta is 0 at
gamma <= 0, 1 at gamma >= gamma_max and monotonically increasing in
between; it is piecewise smooth between "events", the ratios A_ij / P_ij
at which a pair changes sign. The inverse gamma(beta) has a closed form
per inter-event interval:

    gamma(beta) = [SA- + beta (SA+ - SA-)] / [SP- + beta (SP+ - SP-)]

with SA/SP the sums of A and P over the sets E-/E+ frozen for the
interval.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .graph import Graph
from .modularity import Partition, QualityProblem, iterated_louvain
from .seeding import as_seed_sequence, child, spawn


def _pair_ratios(graph: Graph):
    """Off-diagonal pairs split into edges (A>0, with ratio A/P) and the
    aggregate A=0 remainder; returns (ratios, a_vals, p_vals, p_zero_sum).

    Sums are over unordered pairs i<j. Pairs with P=0 carry A=0 as well
    (an edge endpoint always has positive strength) and drop out.
    """
    if graph.total_weight <= 0:
        raise DomainError("graph has no edges")
    k = graph.strengths
    two_m = graph.total_weight
    off = graph.edge_i != graph.edge_j
    ei, ej, ew = graph.edge_i[off], graph.edge_j[off], graph.edge_w[off]
    pos = ew > 0
    ei, ej, ew = ei[pos], ej[pos], ew[pos]
    p_edge = k[ei] * k[ej] / two_m
    if p_edge.size == 0 or np.any(p_edge <= 0):
        raise DomainError("no pair with positive null-model weight")
    ratios = ew / p_edge
    # sum of P over all unordered off-diagonal pairs: (sum_ij P - trace) / 2
    p_total_off = (two_m - float(np.dot(k, k)) / two_m) / 2.0
    p_zero_sum = p_total_off - float(p_edge.sum())
    return ratios, ew, p_edge, max(p_zero_sum, 0.0)


def gamma_max(graph: Graph) -> float:
    """Smallest gamma with A_ij - gamma P_ij <= 0 for all pairs i != j."""
    ratios, _, _, _ = _pair_ratios(graph)
    return float(ratios.max())


def _kahan_cumsum(values: np.ndarray) -> np.ndarray:
    """Compensated (Neumaier) running sums; values may span many orders."""
    out = np.empty(values.size)
    total = 0.0
    comp = 0.0
    for idx, v in enumerate(values):
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
        out[idx] = total + comp
    return out


@dataclass(frozen=True)
class EventProfile:
    """Piecewise description of beta(gamma) for one graph.

    ``events`` holds the distinct crossing values; the cumulative sums give
    SA-/SP- for pairs that have crossed at or below each event, with the
    A=0 pairs folded in as a gamma=0 baseline. Queries are O(log E).
    """

    events: np.ndarray          # distinct crossing ratios, ascending
    sa_below: np.ndarray        # sum of A over pairs with ratio <= events[k]
    sp_below: np.ndarray        # sum of P over the same pairs, incl. A=0 pairs
    sp_zero: float              # P-sum of A=0 pairs (in E- for any gamma > 0)
    sa_total: float
    sp_total: float
    gamma_max: float
    beta_at_events: np.ndarray  # beta evaluated at each event value
    beta_min: float = 0.0
    beta_max: float = 1.0

    def _interval_sums(self, idx: int):
        """Frozen (SA-, SP-, SA+, SP+) for gamma in [events[idx-1], events[idx])."""
        sa_m = float(self.sa_below[idx - 1]) if idx > 0 else 0.0
        sp_m = float(self.sp_below[idx - 1]) if idx > 0 else self.sp_zero
        return sa_m, sp_m, self.sa_total - sa_m, self.sp_total - sp_m

    def beta(self, gamma: float) -> float:
        """Relative magnitude of antiferromagnetic interactions at gamma."""
        if gamma <= 0:
            return 0.0
        if gamma >= self.gamma_max:
            return 1.0
        idx = int(np.searchsorted(self.events, gamma, side="right"))
        sa_m, sp_m, sa_p, sp_p = self._interval_sums(idx)
        neg = gamma * sp_m - sa_m
        pos = sa_p - gamma * sp_p
        return neg / (neg + pos)

    def gamma_of_beta(self, beta: float) -> float:
        """Invert beta(gamma) using the interval-frozen closed form."""
        if beta < 0.0 or beta > 1.0:
            raise DomainError(f"beta={beta} outside [0, 1]")
        if beta >= 1.0:
            return self.gamma_max
        if beta <= 0.0:
            return 0.0
        idx = int(np.searchsorted(self.beta_at_events, beta, side="left"))
        sa_m, sp_m, sa_p, sp_p = self._interval_sums(idx)
        num = sa_m + beta * (sa_p - sa_m)
        den = sp_m + beta * (sp_p - sp_m)
        gamma = num / den
        lo = float(self.events[idx - 1]) if idx > 0 else 0.0
        hi = float(self.events[idx])
        return float(min(max(gamma, lo), hi))


def build_event_profile(graph: Graph) -> EventProfile:
    """Assemble the event table; O(E log E) once, O(log E) per query."""
    ratios, a_vals, p_vals, p_zero = _pair_ratios(graph)
    order = np.argsort(ratios, kind="stable")
    ratios, a_vals, p_vals = ratios[order], a_vals[order], p_vals[order]
    events, starts = np.unique(ratios, return_index=True)
    ends = np.append(starts[1:], ratios.size) - 1
    sa_cum = _kahan_cumsum(a_vals)
    sp_cum = _kahan_cumsum(p_vals)
    sa_below = sa_cum[ends]
    sp_below = sp_cum[ends] + p_zero
    sa_total = float(sa_cum[-1])
    sp_total = float(sp_cum[-1]) + p_zero
    g_max = float(events[-1])
    # beta at event k evaluates with the sums frozen just below the event;
    # the crossing pairs contribute zero there so this equals the limit
    # from either side.
    beta_at = np.empty(events.size)
    for k, e in enumerate(events):
        sa_m = float(sa_below[k - 1]) if k > 0 else 0.0
        sp_m = float(sp_below[k - 1]) if k > 0 else p_zero
        neg = e * sp_m - sa_m
        pos = (sa_total - sa_m) - e * (sp_total - sp_m)
        beta_at[k] = 1.0 if e >= g_max else neg / (neg + pos)
    return EventProfile(
        events=events,
        sa_below=sa_below,
        sp_below=sp_below,
        sp_zero=p_zero,
        sa_total=sa_total,
        sp_total=sp_total,
        gamma_max=g_max,
        beta_at_events=beta_at,
    )


def gamma_of_beta(profile: EventProfile, beta: float) -> float:
    return profile.gamma_of_beta(beta)


def estimate_gamma_min(graph: Graph, samples_per_iter: int = 10,
                       epsilon: float | None = None, seed=0,
                       max_iter: int = 100) -> float:
    """Numerical estimate of gamma_min.

    Modularity is linear in gamma for a fixed partition, so each sampled
    non-trivial partition yields the exact gamma at which it starts to beat
    the one-cluster partition. Starting from samples at gamma=1 the running
    minimum crossing is refined by re-sampling just below it until a sample
    contains only the trivial partition.

    By default the step below the running estimate is relative,
    eps_t = 1e-3 * gamma_min_current; a fixed ``epsilon`` can be supplied
    instead. (A step tied to gamma_max would jump to negative gamma on
    graphs with heavy-tailed interaction ratios and silently skip the
    refinement.)

    If the initial sample is all-trivial the bootstrap re-samples at
    gamma_max, where the all-singleton partition is returned and supplies a
    first crossing.

    Raises
    ------
    ConvergenceError
        After ``max_iter`` refinements; carries the best estimate.
    """
    if samples_per_iter < 1:
        raise DomainError("samples_per_iter must be >= 1")
    g_max = gamma_max(graph)
    if epsilon is not None and epsilon <= 0:
        raise DomainError("epsilon must be > 0")
    two_m = graph.total_weight
    a = graph.adjacency()
    p = np.outer(graph.strengths, graph.strengths) / two_m
    ss = as_seed_sequence(seed)

    def crossings(gamma, sub):
        problem = QualityProblem(a - gamma * p)
        out = []
        for part_seed in spawn(sub, samples_per_iter):
            part = iterated_louvain(problem, part_seed)
            if part.is_trivial():
                continue
            sa = _pair_weight_within(a, part)
            sp = _pair_weight_within(p, part)
            if two_m - sp <= 1e-9 * two_m:
                # ties the trivial partition for every gamma (e.g. a split
                # that only detaches zero-strength nodes); no crossing
                continue
            # Q(part) = SA - gamma SP crosses Q(trivial) = 2m - gamma 2m
            out.append((two_m - sa) / (two_m - sp))
        return out

    current = crossings(1.0, child(ss, 0))
    if not current:
        current = crossings(g_max, child(ss, 1))
    gamma_min = min(current) if current else 0.0
    for it in range(2, max_iter + 2):
        if gamma_min <= 1e-12:
            return 0.0
        step = epsilon if epsilon is not None else 1e-3 * gamma_min
        found = crossings(gamma_min - step, child(ss, it))
        if not found:
            return float(max(gamma_min, 0.0))
        gamma_min = min(gamma_min, min(found))
    raise ConvergenceError(
        f"gamma_min did not settle within {max_iter} iterations",
        best=float(max(gamma_min, 0.0)))


def _pair_weight_within(matrix: np.ndarray, partition: Partition) -> float:
    """sum_ij M_ij delta(g_i, g_j) including the diagonal."""
    g = partition.assignments
    total = 0.0
    for members in partition.clusters():
        total += float(matrix[np.ix_(members, members)].sum())
    return total


def sample_gammas(graph: Graph, strategy: str, count: int,
                  gamma_range: tuple[float, float]) -> np.ndarray:
    """Gamma samples by ``event``, ``linear`` or ``exponential`` strategy.

    Event sampling places samples equally spaced in beta between
    beta(gamma_min) and beta(gamma_max); linear/exponential are arithmetic/
    geometric progressions over the range. Output is sorted ascending.
    """
    lo, hi = float(gamma_range[0]), float(gamma_range[1])
    if count < 2:
        raise DomainError("count must be >= 2")
    if not lo < hi:
        raise DomainError(f"need gamma_min < gamma_max, got ({lo}, {hi})")
    if strategy == "linear":
        return np.linspace(lo, hi, count)
    if strategy == "exponential":
        if lo <= 0:
            raise DomainError(
                "exponential sampling needs gamma_min > 0; clamp the lower "
                "bound to a small positive value (e.g. smallest event / 1000) "
                "to opt in")
        return np.geomspace(lo, hi, count)
    if strategy == "event":
        profile = build_event_profile(graph)
        b_lo = profile.beta(lo)
        b_hi = profile.beta(hi)
        betas = np.linspace(b_lo, b_hi, count)
        gammas = np.array([profile.gamma_of_beta(b) for b in betas])
        return np.sort(gammas)
    raise DomainError(f"unknown sampling strategy {strategy!r}")


def write_event_table(profile: EventProfile, path) -> None:
    """CSV of (gamma, beta) at each event, for plotting beta curves."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["gamma", "beta"])
        writer.writerow([repr(0.0), repr(0.0)])
        for e in profile.events:
            writer.writerow([repr(float(e)), repr(profile.beta(float(e)))])
