import numpy as np
import pytest

from fairsel import corrgraph, data
from fairsel.corrgraph import (CorrelationGraph, build_graph, distance_to_set,
                               euclid_distance, path_exists, pearson)


class TestPearson:
    def test_self_correlation(self):
        assert pearson([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)

    def test_perfect_anticorrelation(self):
        assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_hand_computed(self):
        # cov = 1.0, stds = sqrt(1.25) each -> r = 1 / 1.25
        assert pearson([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8)

    def test_zero_variance_returns_zero(self):
        assert pearson([1, 1, 1], [1, 2, 3]) == 0.0

    def test_errors(self):
        with pytest.raises(ValueError):
            pearson([1, 2], [1, 2, 3])
        with pytest.raises(ValueError):
            pearson([1], [1])

    def test_matches_standardized_dot_product(self, tiny_synth):
        std, _, _ = data.standardize(tiny_synth)
        z = std.features
        n = std.n_rows
        for i in range(std.n_features):
            for j in range(i + 1, std.n_features):
                direct = pearson(tiny_synth.features[:, i],
                                 tiny_synth.features[:, j])
                via_dot = float(z[:, i] @ z[:, j]) / n
                assert direct == pytest.approx(via_dot, abs=1e-9)


class TestBuildGraph:
    def test_threshold_one_no_duplicates_empty(self, tiny_synth):
        g = build_graph(tiny_synth, 1.0)
        assert g.edges == ()

    def test_duplicate_column_edge_weight_one(self):
        col = np.array([1.0, 2.0, 5.0, 3.0])
        ds = data.Dataset(np.column_stack([col, col]), np.array([0, 1, 0, 1]),
                          ("a", "b"), ("continuous", "continuous"))
        g = build_graph(ds, 1.0)
        assert g.edges == ((0, 1),)
        assert g.corr[0, 1] == pytest.approx(1.0)

    def test_planted_proxy_edge(self):
        spec = data.SyntheticSpec(
            n_rows=5000, n_sensitive=1, n_proxies_per_sensitive=1,
            proxy_correlation=0.9, n_informative=1, n_noise=1, seed=0,
        )
        ds = data.generate_synthetic(spec)
        g = build_graph(ds, 0.5)
        s = ds.names.index("sens_0")
        p = ds.names.index("proxy_0_0")
        n = ds.names.index("noise_0")
        assert (min(s, p), max(s, p)) in g.edges
        assert (min(s, n), max(s, n)) not in g.edges

    def test_invalid_threshold(self, tiny_synth):
        for bad in (0.0, 1.5, -0.2):
            with pytest.raises(ValueError):
                build_graph(tiny_synth, bad)

    def test_graph_invariants(self, tiny_synth):
        g = build_graph(tiny_synth, 0.3)
        assert np.allclose(g.corr, g.corr.T)
        assert np.allclose(np.diag(g.corr), 1.0)
        for i, j in g.edges:
            assert i < j
            assert abs(g.corr[i, j]) >= g.threshold

    def test_threshold_monotonicity(self, tiny_synth):
        lo = set(build_graph(tiny_synth, 0.2).edges)
        hi = set(build_graph(tiny_synth, 0.6).edges)
        assert hi <= lo


def chain_graph():
    # A-B-C chain, D isolated
    corr = np.eye(4)
    corr[0, 1] = corr[1, 0] = 0.8
    corr[1, 2] = corr[2, 1] = -0.7
    return CorrelationGraph(corr, 0.5, ("A", "B", "C", "D"))


class TestPathExists:
    def test_adjacent(self):
        assert path_exists(chain_graph(), 0, 1)

    def test_isolated(self):
        g = chain_graph()
        for other in (0, 1, 2):
            assert not path_exists(g, 3, other)

    def test_chain_transitivity(self):
        g = chain_graph()
        assert (0, 2) not in g.edges
        assert path_exists(g, 0, 2)

    def test_same_node_rejected(self):
        with pytest.raises(ValueError):
            path_exists(chain_graph(), 1, 1)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            path_exists(chain_graph(), 0, 9)

    def test_matches_matrix_power_closure(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            d = int(rng.integers(2, 11))
            corr = np.eye(d)
            for i in range(d):
                for j in range(i + 1, d):
                    corr[i, j] = corr[j, i] = rng.uniform(-1, 1)
            g = CorrelationGraph(corr, 0.6, tuple(f"f{i}" for i in range(d)))
            adj = np.zeros((d, d), dtype=bool)
            for i, j in g.edges:
                adj[i, j] = adj[j, i] = True
            # transitive closure by boolean matrix powering
            reach = adj | np.eye(d, dtype=bool)
            for _ in range(d):
                reach = reach | (reach @ reach)
            for i in range(d):
                for j in range(d):
                    if i != j:
                        assert path_exists(g, i, j) == bool(reach[i, j])


class TestEuclidDistance:
    def test_case1_distance(self):
        corr = np.eye(2)
        corr[0, 1] = corr[1, 0] = -0.125
        g = CorrelationGraph(corr, 0.1, ("a", "b"))
        assert euclid_distance(g, 0, 1) == 1.5

    def test_duplicate_clamped(self):
        corr = np.ones((2, 2))
        g = CorrelationGraph(corr, 0.5, ("a", "b"))
        assert euclid_distance(g, 0, 1) == 1e-6

    def test_anticorrelated_endpoint(self):
        corr = np.eye(2)
        corr[0, 1] = corr[1, 0] = -1.0
        g = CorrelationGraph(corr, 0.5, ("a", "b"))
        assert euclid_distance(g, 0, 1) == 2.0

    def test_unsigned_flag_uses_absolute_value(self):
        corr = np.eye(2)
        corr[0, 1] = corr[1, 0] = -1.0
        g = CorrelationGraph(corr, 0.5, ("a", "b"), signed_distance=False)
        assert euclid_distance(g, 0, 1) == 1e-6

    def test_symmetric_and_bounded(self, tiny_synth):
        g = build_graph(tiny_synth, 0.3)
        for i in range(g.node_count):
            for j in range(g.node_count):
                if i == j:
                    continue
                d = euclid_distance(g, i, j)
                assert d == euclid_distance(g, j, i)
                assert 1e-6 <= d <= 2.0

    def test_same_node_rejected(self):
        with pytest.raises(ValueError):
            euclid_distance(chain_graph(), 2, 2)


class TestDistanceToSet:
    def test_single_reachable_sensitive(self):
        corr = np.eye(3)
        corr[0, 1] = corr[1, 0] = -0.125
        g = CorrelationGraph(corr, 0.1, ("b", "x", "y"))
        assert distance_to_set(g, 1, {0}) == 1.5

    def test_isolated_returns_none(self):
        g = chain_graph()
        assert distance_to_set(g, 3, {0}) is None

    def test_minimum_over_reachable(self):
        # node 2 reaches sensitive 0 (direct corr -0.125 -> 1.5) and
        # sensitive 1 (corr 0.68 -> 0.8)
        corr = np.eye(3)
        corr[0, 2] = corr[2, 0] = -0.125
        corr[1, 2] = corr[2, 1] = 0.68
        g = CorrelationGraph(corr, 0.1, ("b1", "b2", "x"))
        assert distance_to_set(g, 2, {0, 1}) == pytest.approx(0.8)

    def test_sensitive_member_rejected(self):
        with pytest.raises(ValueError):
            distance_to_set(chain_graph(), 0, {0, 1})

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            distance_to_set(chain_graph(), 0, set())


def test_export_edges_rows():
    g = chain_graph()
    rows = corrgraph.export_edges(g)
    assert [(a, b) for a, b, _, _ in rows] == [("A", "B"), ("B", "C")]
    for _, _, corr, dist in rows:
        assert 1e-6 <= dist <= 2.0
        assert abs(corr) >= g.threshold
