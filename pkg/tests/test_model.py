import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcsbm._core import _pairs_np
from dcsbm.model import (
    DcsbmParams,
    ModelError,
    aggregates,
    contiguous_sigma,
    edge_probability,
    edge_probability_matrix,
    expected_degree,
    expected_degrees,
    identifiability_check,
    reparameterize_equivalent,
    sample_graph,
    validate,
    weight_family,
)


def tiny_params(block, n=4, K=1, alpha=None, sigma=None, weights=None):
    alpha = np.array([1.0]) if alpha is None else np.asarray(alpha, dtype=float)
    sigma = (
        contiguous_sigma(n, alpha) if sigma is None else np.asarray(sigma, dtype=np.int64)
    )
    weights = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    return DcsbmParams(n=n, K=K, alpha=alpha, sigma=sigma, weights=weights,
                       block=np.asarray(block, dtype=float))


def rank2_params(n=300):
    """Rank-2 three-community instance whose normalized rows still differ."""
    alpha = np.array([1, 1, 1]) / 3.0
    sigma = contiguous_sigma(n, alpha)
    logsq = np.log(n) ** 2
    weights = np.empty(n)
    for i in range(3):
        weights[sigma == i] = (i + 1) * logsq  # block weight mass (i+1) a_i n log^2 n
    block = np.array([[1.0, 2.0, 3.0], [2.0, 0.0, 2.0], [3.0, 2.0, 5.0]])
    return DcsbmParams(n=n, K=3, alpha=alpha, sigma=sigma, weights=weights, block=block)


class TestValidate:
    def test_simple_valid(self):
        p = tiny_params([[2.0]])
        rep = validate(p)
        assert rep.valid
        assert edge_probability(p, 0, 1) == pytest.approx(0.5)

    def test_probability_cap_violation(self):
        p = tiny_params([[5.0]])
        rep = validate(p)
        assert not rep.valid
        assert any("1.25" in v and "(0,1)" in v.replace(" ", "") for v in rep.violations)

    def test_proportional_rows_advisory(self):
        p = tiny_params([[1.0, 2.0], [2.0, 4.0]], K=2, alpha=[0.5, 0.5],
                        sigma=[0, 0, 1, 1])
        rep = validate(p)
        assert rep.valid
        assert any("identifiability violated for pair (0,1)" in a for a in rep.advisories)

    def test_asymmetric_block_rejected(self):
        p = tiny_params([[1.0, 2.0], [1.0, 1.0]], K=2, alpha=[0.5, 0.5],
                        sigma=[0, 0, 1, 1])
        assert not validate(p).valid

    def test_wrong_block_sizes_rejected(self):
        p = tiny_params([[1.0, 1.0], [1.0, 1.0]], K=2, alpha=[0.5, 0.5],
                        sigma=[0, 0, 0, 1])
        rep = validate(p)
        assert any("members" in v for v in rep.violations)


class TestAggregates:
    @pytest.mark.parametrize("a,b", [(1.0, 2.0), (5.0, 1.0), (0.5, 0.25)])
    def test_two_block_symmetric(self, a, b):
        p = tiny_params([[a, b], [b, a]], K=2, alpha=[0.5, 0.5], sigma=[0, 0, 1, 1])
        agg = aggregates(p)
        assert agg.d_bar == pytest.approx(1.0)
        assert agg.M[0] == pytest.approx(2 * a + 2 * b)
        assert agg.M_bar[0] == pytest.approx((a + b) / 2)

    def test_single_block_collapse(self):
        p = tiny_params([[3.7]], weights=[2.0, 1.0, 4.0, 3.0])
        assert aggregates(p).M_bar[0] == pytest.approx(3.7)

    def test_rank2_instance_identifiable(self):
        p = rank2_params()
        agg = aggregates(p)
        # Mbar_i = sum_k B_ik * (block k weight mass / total mass), exactly.
        total = p.weights.sum()
        for i in range(3):
            manual = sum(
                p.block[i, k] * p.weights[p.sigma == k].sum() / total for k in range(3)
            )
            assert agg.M_bar[i] == pytest.approx(manual, rel=1e-14)
        assert identifiability_check(p) == []

    def test_block_averages_recombine(self):
        rng = np.random.default_rng(0)
        p = tiny_params([[1.0, 0.5], [0.5, 2.0]], n=40, K=2, alpha=[0.5, 0.5],
                        sigma=[0] * 20 + [1] * 20, weights=rng.uniform(0.5, 3.0, 40))
        agg = aggregates(p)
        sizes = np.bincount(p.sigma)
        assert np.sum(sizes * agg.d_bar_per_block) == pytest.approx(p.n * agg.d_bar)


class TestEdgeProbability:
    def test_diagonal_zero(self):
        assert edge_probability(tiny_params([[2.0]]), 2, 2) == 0.0

    def test_eppm_form(self):
        rng = np.random.default_rng(1)
        w = rng.uniform(0.5, 1.5, 10)
        a, b = 2.0, 0.5
        p = tiny_params([[a, b], [b, a]], n=10, K=2, alpha=[0.5, 0.5],
                        sigma=[0] * 5 + [1] * 5, weights=w)
        scale = 1.0 / (10 * w.mean())
        for u in range(10):
            for v in range(u + 1, 10):
                rate = a if p.sigma[u] == p.sigma[v] else b
                assert edge_probability(p, u, v) == pytest.approx(w[u] * w[v] * scale * rate)

    def test_invalid_pair_raises(self):
        p = tiny_params([[5.0]])
        with pytest.raises(ModelError):
            edge_probability(p, 0, 1)


class TestSampler:
    def test_zero_rate_empty(self):
        g = sample_graph(tiny_params([[0.0]], n=6), seed=1)
        assert g.num_edges == 0
        assert np.all(g.degrees == 0)

    def test_rate_one_complete(self):
        # Tuned to the probability boundary: every pair has probability 1.
        p = tiny_params([[4.0]], n=4)
        g = sample_graph(p, seed=9)
        assert g.num_edges == 6
        assert np.all(g.degrees == 3)

    def test_determinism_and_kernel_parity(self):
        p = tiny_params([[1.5, 0.5], [0.5, 1.5]], n=60, K=2, alpha=[0.5, 0.5],
                        sigma=[0] * 30 + [1] * 30)
        g1 = sample_graph(p, seed=123)
        g2 = sample_graph(p, seed=123)
        assert np.array_equal(g1.edges, g2.edges)
        us, vs = _pairs_np.sample_edges(
            123, p.weights, p.sigma, p.block, 1.0 / (p.n * p.d_bar)
        )
        assert np.array_equal(np.column_stack([us, vs]), g1.edges)

    def test_mean_degree_matches_analytic(self):
        # Monte-Carlo mean observed degree against the exact expectation.
        n = 2000
        alpha = np.array([0.5, 0.5])
        sigma = contiguous_sigma(n, alpha)
        w = np.full(n, np.log(n) ** 2)
        p = DcsbmParams(n=n, K=2, alpha=alpha, sigma=sigma, weights=w,
                        block=np.array([[5.0, 1.0], [1.0, 5.0]]))
        probs = edge_probability_matrix(p)
        mean_u = probs.sum(axis=1)
        var_u = (probs * (1 - probs)).sum(axis=1)
        n_seeds = 20
        got = np.mean([sample_graph(p, s).degrees for s in range(n_seeds)], axis=0)
        sigma_mean = np.sqrt(var_u / n_seeds)
        # Fixed probe vertices at 3 sigma; all vertices at a simultaneous level.
        for u in (0, n // 2, n - 1):
            assert abs(got[u] - mean_u[u]) <= 3 * sigma_mean[u]
        assert np.all(np.abs(got - mean_u) <= 5 * sigma_mean)

    def test_exchangeability_via_pair_probabilities(self):
        rng = np.random.default_rng(7)
        p = tiny_params([[1.0, 0.3], [0.3, 2.0]], n=12, K=2, alpha=[0.5, 0.5],
                        sigma=[0] * 6 + [1] * 6, weights=rng.uniform(0.5, 2.0, 12))
        perm = rng.permutation(12)
        q = DcsbmParams(n=12, K=2, alpha=p.alpha, sigma=p.sigma[perm],
                        weights=p.weights[perm], block=p.block)
        pm = edge_probability_matrix(p)
        qm = edge_probability_matrix(q)
        assert np.allclose(qm, pm[np.ix_(perm, perm)], rtol=1e-14, atol=0)


class TestIdentifiability:
    def test_proportional_pair_listed(self):
        p = tiny_params([[1.0, 2.0], [2.0, 4.0]], K=2, alpha=[0.5, 0.5],
                        sigma=[0, 0, 1, 1])
        assert identifiability_check(p) == [(0, 1)]

    def test_rank2_instance_empty(self):
        assert identifiability_check(rank2_params()) == []

    def test_single_block_no_pairs(self):
        assert identifiability_check(tiny_params([[2.0]])) == []

    @settings(max_examples=50, deadline=None)
    @given(
        b_row=st.lists(st.floats(0.1, 5.0), min_size=2, max_size=2),
        c=st.floats(0.1, 10.0),
        b_cross=st.floats(0.1, 5.0),
    )
    def test_random_proportional_rows_flagged(self, b_row, c, b_cross):
        # Any block matrix with two proportional rows is non-identifiable.
        b11, b12 = b_row
        block = np.array([[b11, c * b11], [c * b11, c * c * b11]])
        p = tiny_params(block, n=8, K=2, alpha=[0.5, 0.5], sigma=[0] * 4 + [1] * 4)
        assert (0, 1) in identifiability_check(p)


class TestReparameterize:
    def test_proportional_rows_merged(self):
        p = tiny_params([[1.0, 2.0], [2.0, 4.0]], n=10, K=2, alpha=[0.5, 0.5],
                        sigma=[0] * 5 + [1] * 5)
        star = reparameterize_equivalent(p, 0, 1)
        assert np.allclose(star.block[0], star.block[1], rtol=1e-12)
        assert np.allclose(
            edge_probability_matrix(star), edge_probability_matrix(p), rtol=1e-10
        )

    def test_single_block_global_reweight(self):
        p = tiny_params([[2.0]], n=6, weights=[1.0, 2.0, 1.0, 2.0, 1.0, 2.0])
        star = reparameterize_equivalent(p, 0, 0)
        assert np.allclose(
            edge_probability_matrix(star), edge_probability_matrix(p), rtol=1e-10
        )

    def test_eppm_equal_rates(self):
        p = tiny_params([[1.0, 1.0], [1.0, 1.0]], n=8, K=2, alpha=[0.5, 0.5],
                        sigma=[0] * 4 + [1] * 4)
        star = reparameterize_equivalent(p, 0, 1)
        assert np.allclose(star.block[0], star.block[1], rtol=1e-12)
        assert np.allclose(
            edge_probability_matrix(star), edge_probability_matrix(p), rtol=1e-10
        )

    def test_identifiable_pair_rejected(self):
        p = rank2_params(30)
        with pytest.raises(ModelError):
            reparameterize_equivalent(p, 0, 1)


class TestExpectedDegree:
    def test_four_node_closed_form(self):
        assert expected_degree(tiny_params([[2.0]]), 0) == pytest.approx(1.5)

    def test_zero_block_row(self):
        p = tiny_params([[0.0, 0.0], [0.0, 1.0]], K=2, alpha=[0.5, 0.5],
                        sigma=[0, 0, 1, 1])
        assert expected_degree(p, 0) == 0.0

    def test_monte_carlo_within_one_percent(self):
        n = 2000
        alpha = np.array([0.5, 0.5])
        p = DcsbmParams(
            n=n, K=2, alpha=alpha, sigma=contiguous_sigma(n, alpha),
            weights=np.full(n, np.log(n) ** 2),
            block=np.array([[5.0, 1.0], [1.0, 5.0]]),
        )
        expected = expected_degrees(p)
        mean = np.mean(
            [sample_graph(p, s).degrees.mean() for s in range(50)]
        )
        assert mean == pytest.approx(expected.mean(), rel=0.01)


class TestWeightFamilies:
    def test_constant(self):
        assert np.all(weight_family("constant", 5, param=2.5) == 2.5)

    def test_power(self):
        w = weight_family("power", 4, param=2.0)
        assert np.allclose(w, [1.0, 4.0, 9.0, 16.0])

    def test_blockpow3(self):
        sigma = np.array([0, 0, 1, 1, 1])
        w = weight_family("blockpow3", 5, sigma=sigma)
        assert np.allclose(w, [1.0, 2 ** (1 / 3), 1.0, 2 ** (1 / 3), 3 ** (1 / 3)])

    def test_unknown_family(self):
        with pytest.raises(ModelError):
            weight_family("nope", 3)


class TestSamplerStatistics:
    def test_per_pair_frequency_matches_probability(self):
        # Over many seeds, each pair's inclusion frequency is a Binomial
        # mean; check every pair at a simultaneous 4.5-sigma level.
        rng = np.random.default_rng(0)
        n = 12
        p = tiny_params(
            [[2.0, 0.7], [0.7, 1.4]], n=n, K=2, alpha=[0.5, 0.5],
            sigma=[0] * 6 + [1] * 6, weights=rng.uniform(0.5, 1.8, n),
        )
        probs = edge_probability_matrix(p)
        trials = 4000
        counts = np.zeros((n, n))
        for seed in range(trials):
            g = sample_graph(p, seed)
            for u, v in g.edges:
                counts[u, v] += 1
        freq = counts / trials
        iu = np.triu_indices(n, k=1)
        sd = np.sqrt(probs[iu] * (1 - probs[iu]) / trials)
        dev = np.abs(freq[iu] - probs[iu])
        assert np.all(dev <= 4.5 * np.maximum(sd, 1e-12))

    def test_pair_uniform_distribution(self):
        # Coarse uniformity of the per-pair hash stream.
        from dcsbm._core import pair_uniform

        draws = np.array(
            [pair_uniform(7, u, v) for u in range(200) for v in range(u + 1, u + 40)]
        )
        assert draws.min() >= 0.0 and draws.max() < 1.0
        hist, _ = np.histogram(draws, bins=16, range=(0, 1))
        expected = draws.size / 16
        chi2 = float(((hist - expected) ** 2 / expected).sum())
        # 15 degrees of freedom: far tail at ~45; generous margin.
        assert chi2 < 60.0
        assert abs(draws.mean() - 0.5) < 0.01


class TestGraphConstruction:
    @settings(max_examples=40, deadline=None)
    @given(
        edges=st.lists(
            st.tuples(st.integers(0, 14), st.integers(0, 14)).filter(
                lambda p: p[0] != p[1]
            ),
            max_size=40,
            unique_by=lambda p: (min(p), max(p)),
        )
    )
    def test_from_edge_arrays_canonicalizes(self, edges):
        from dcsbm.model import Graph

        us = np.array([e[0] for e in edges], dtype=np.int64)
        vs = np.array([e[1] for e in edges], dtype=np.int64)
        g = Graph.from_edge_arrays(15, us, vs)
        assert g.num_edges == len(edges)
        if g.num_edges:
            assert np.all(g.edges[:, 0] < g.edges[:, 1])
            order = np.lexsort((g.edges[:, 1], g.edges[:, 0]))
            assert np.array_equal(order, np.arange(g.num_edges))
        assert int(g.degrees.sum()) == 2 * g.num_edges

    def test_rejects_duplicates_and_loops(self):
        from dcsbm.model import Graph

        with pytest.raises(ValueError):
            Graph.from_edge_arrays(3, np.array([0, 1]), np.array([1, 0]))
        with pytest.raises(ValueError):
            Graph.from_edge_arrays(3, np.array([2]), np.array([2]))


class TestHeavyTailFamily:
    def test_tail_shape(self):
        w = weight_family("heavytail", 10000, param=2.0, extra=(0.25, 0.2))
        k = round(10000 ** 0.25)
        assert np.all(w[: 10000 - k] == 2.0)
        assert w[-1] == pytest.approx(2.0 * 10000 ** 0.2 * k)
        assert np.all(np.diff(w[10000 - k :]) > 0)

    def test_missing_exponents(self):
        with pytest.raises(ModelError):
            weight_family("heavytail", 100, param=2.0)


class TestParamsShapeValidation:
    def test_shape_mismatches_rejected(self):
        with pytest.raises(ModelError):
            DcsbmParams(n=4, K=2, alpha=[1.0], sigma=[0, 0, 1, 1],
                        weights=[1, 1, 1, 1], block=[[1, 0], [0, 1]])
        with pytest.raises(ModelError):
            DcsbmParams(n=4, K=1, alpha=[1.0], sigma=[0, 0, 0],
                        weights=[1, 1, 1, 1], block=[[1]])
        with pytest.raises(ModelError):
            DcsbmParams(n=4, K=1, alpha=[1.0], sigma=[0, 0, 0, 0],
                        weights=[1, 1, 1, 1], block=[[1, 2]])


class TestKernelParityBroad:
    @settings(max_examples=25, deadline=None)
    @given(
        n=st.integers(10, 80),
        k=st.integers(1, 4),
        seed=st.integers(0, 2**63 - 1),
        wlo=st.floats(0.2, 1.0),
        whi=st.floats(1.0, 4.0),
        rate=st.floats(0.0, 3.0),
    )
    def test_both_kernels_agree_on_random_models(self, n, k, seed, wlo, whi, rate):
        from dcsbm import _core

        rng = np.random.default_rng(seed % (2**32))
        alpha = rng.dirichlet(np.ones(k) * 5)
        sigma = rng.integers(0, k, size=n).astype(np.int64)
        weights = rng.uniform(wlo, whi, n)
        raw = rng.uniform(0, rate, (k, k))
        block = np.ascontiguousarray((raw + raw.T) / 2)
        inv = 1.0 / (n * weights.mean())
        # Cap so probabilities stay in [0, 1]; parity must hold regardless.
        cap = weights.max() ** 2 * block.max() * inv
        if cap > 1:
            block = block / cap
            block = np.ascontiguousarray(block)
        u1, v1 = _core._impl.sample_edges(seed, weights, sigma, block, inv)
        u2, v2 = _pairs_np.sample_edges(seed, weights, sigma, block, inv)
        assert np.array_equal(u1, u2)
        assert np.array_equal(v1, v2)


class TestReparameterizeIdempotent:
    def test_second_application_preserves_probabilities(self):
        p = tiny_params([[1.0, 1.0], [1.0, 1.0]], n=8, K=2, alpha=[0.5, 0.5],
                        sigma=[0] * 4 + [1] * 4, weights=np.linspace(0.5, 2.0, 8))
        once = reparameterize_equivalent(p, 0, 1)
        twice = reparameterize_equivalent(once, 0, 1)
        assert np.allclose(twice.block[0], twice.block[1], rtol=1e-12)
        assert np.allclose(
            edge_probability_matrix(twice), edge_probability_matrix(p), rtol=1e-10
        )


class TestBlockSizeRounding:
    @settings(max_examples=60, deadline=None)
    @given(
        n=st.integers(1, 500),
        raw=st.lists(st.floats(0.05, 1.0), min_size=1, max_size=6),
    )
    def test_sizes_sum_and_stay_close(self, n, raw):
        from dcsbm.model import expected_block_sizes

        alpha = np.array(raw) / np.sum(raw)
        sizes = expected_block_sizes(n, alpha)
        assert int(sizes.sum()) == n
        assert np.all(sizes >= 0)
        # Largest-remainder correction moves each entry at most one unit
        # beyond plain rounding.
        assert np.all(np.abs(sizes - alpha * n) <= 1.0 + 1e-9)

    def test_heterogeneity_advisory_fires(self):
        # Tiny weights relative to log n trip the concentration warning.
        p = tiny_params([[0.5]], n=100, weights=np.full(100, 0.5))
        rep = validate(p)
        assert rep.valid
        assert any("log n" in a for a in rep.advisories)
