import numpy as np
import pytest

from hiercons.errors import DomainError
from hiercons.graph import Graph
from hiercons.resolution import (build_event_profile, estimate_gamma_min,
                                 gamma_max, gamma_of_beta, sample_gammas)

from oracles import beta_direct, random_weighted_graph


@pytest.fixture
def two_triangles():
    return Graph.from_edges(6, [(0, 1, 1), (1, 2, 1), (0, 2, 1),
                                (3, 4, 1), (4, 5, 1), (3, 5, 1)])


def complete_graph(n):
    return Graph.from_edges(n, [(i, j, 1.0)
                                for i in range(n) for j in range(i + 1, n)])


def test_gamma_max_two_triangles(two_triangles):
    assert gamma_max(two_triangles) == pytest.approx(3.0)


def test_gamma_max_clique():
    assert gamma_max(complete_graph(4)) == pytest.approx(4 / 3)
    assert gamma_max(complete_graph(6)) == pytest.approx(6 / 5)


def test_gamma_max_single_edge():
    assert gamma_max(Graph.from_edges(2, [(0, 1, 1.0)])) == pytest.approx(2.0)


def test_gamma_max_needs_positive_null_pairs():
    g = Graph.from_edges(2, [(0, 0, 1.0)])  # self-loop only
    with pytest.raises(DomainError):
        gamma_max(g)


def test_event_profile_two_triangles(two_triangles):
    profile = build_event_profile(two_triangles)
    assert profile.events.tolist() == [3.0]
    assert profile.gamma_max == pytest.approx(3.0)
    assert profile.beta(1.0) == pytest.approx(3 / 7)
    assert profile.beta(0.0) == 0.0
    assert profile.beta(-0.5) == 0.0
    assert profile.beta(3.0) == 1.0
    assert profile.beta(10.0) == 1.0


def test_beta_matches_direct_formula(two_triangles):
    profile = build_event_profile(two_triangles)
    rng = np.random.default_rng(1)
    for gamma in rng.uniform(0.01, 2.99, 25):
        assert profile.beta(gamma) == pytest.approx(
            beta_direct(two_triangles, gamma), abs=1e-12)


def test_beta_matches_direct_formula_random_graphs():
    rng = np.random.default_rng(2)
    for _ in range(5):
        g = random_weighted_graph(rng, int(rng.integers(6, 16)))
        profile = build_event_profile(g)
        for gamma in rng.uniform(1e-6, profile.gamma_max, 20):
            assert profile.beta(float(gamma)) == pytest.approx(
                beta_direct(g, float(gamma)), abs=1e-9)


def test_beta_monotone_on_grid():
    rng = np.random.default_rng(3)
    for _ in range(5):
        g = random_weighted_graph(rng, int(rng.integers(6, 14)))
        profile = build_event_profile(g)
        grid = np.linspace(0, profile.gamma_max, 500)
        vals = [profile.beta(x) for x in grid]
        assert all(b2 >= b1 - 1e-12 for b1, b2 in zip(vals, vals[1:]))


def test_gamma_beta_roundtrip(two_triangles):
    profile = build_event_profile(two_triangles)
    assert profile.gamma_of_beta(3 / 7) == pytest.approx(1.0)
    rng = np.random.default_rng(4)
    for gamma in rng.uniform(1e-6, 3.0, 100):
        rt = profile.gamma_of_beta(profile.beta(gamma))
        assert rt == pytest.approx(gamma, rel=1e-9)


def test_gamma_of_beta_boundaries(two_triangles):
    profile = build_event_profile(two_triangles)
    assert profile.gamma_of_beta(1.0) == pytest.approx(3.0)
    assert profile.gamma_of_beta(0.0) == 0.0
    with pytest.raises(DomainError):
        profile.gamma_of_beta(1.5)
    with pytest.raises(DomainError):
        gamma_of_beta(profile, -0.1)


def test_estimate_gamma_min_two_triangles(two_triangles):
    assert estimate_gamma_min(two_triangles, seed=1) == pytest.approx(0.0)


def test_estimate_gamma_min_clique_hits_gamma_max():
    g = complete_graph(4)
    est = estimate_gamma_min(g, seed=1)
    assert est == pytest.approx(4 / 3, abs=2e-3)


def test_estimate_gamma_min_single_edge():
    g = Graph.from_edges(2, [(0, 1, 1.0)])
    est = estimate_gamma_min(g, seed=1)
    assert est == pytest.approx(2.0, abs=5e-3)


def test_estimate_gamma_min_validates_arguments(two_triangles):
    with pytest.raises(DomainError):
        estimate_gamma_min(two_triangles, samples_per_iter=0)
    with pytest.raises(DomainError):
        estimate_gamma_min(two_triangles, epsilon=-1.0)


def test_sample_gammas_linear(two_triangles):
    out = sample_gammas(two_triangles, "linear", 3, (0.0, 3.0))
    assert out.tolist() == [0.0, 1.5, 3.0]


def test_sample_gammas_exponential(two_triangles):
    out = sample_gammas(two_triangles, "exponential", 3, (0.1, 10.0))
    assert np.allclose(out, [0.1, 1.0, 10.0])


def test_sample_gammas_exponential_rejects_zero_min(two_triangles):
    with pytest.raises(DomainError, match="clamp"):
        sample_gammas(two_triangles, "exponential", 5, (0.0, 3.0))


def test_sample_gammas_event_endpoints(two_triangles):
    out = sample_gammas(two_triangles, "event", 2, (0.0, 3.0))
    profile = build_event_profile(two_triangles)
    assert out[0] == pytest.approx(profile.gamma_of_beta(profile.beta(0.0)))
    assert out[-1] == pytest.approx(3.0)


def test_sample_gammas_event_sorted_in_range():
    rng = np.random.default_rng(8)
    g = random_weighted_graph(rng, 12)
    hi = gamma_max(g)
    out = sample_gammas(g, "event", 20, (0.0, hi))
    assert np.all(np.diff(out) >= -1e-12)
    assert out[0] >= 0.0 and out[-1] <= hi + 1e-12


def test_sample_gammas_validation(two_triangles):
    with pytest.raises(DomainError):
        sample_gammas(two_triangles, "linear", 1, (0.0, 3.0))
    with pytest.raises(DomainError):
        sample_gammas(two_triangles, "linear", 3, (2.0, 1.0))
    with pytest.raises(DomainError):
        sample_gammas(two_triangles, "sobol", 3, (0.0, 3.0))
