import numpy as np
import numpy.testing as npt
import pytest

from sparsesketch import (
    Coloring,
    CountingOracle,
    DenseOracle,
    RandomSeed,
    SparseApprox,
    banded_pattern,
    banded_rademacher_estimate,
    column_intersection_graph,
    diagonal_pattern,
    exact_recover_by_coloring,
    fixed_sparse_recover,
    frobenius_norm,
    gaussian_matrix,
    greedy_coloring,
    hadamard_mask,
    hard_coloring_pattern,
    validate_coloring,
)


class TestColumnIntersectionGraph:
    def test_diagonal_pattern_has_no_edges(self):
        adj = column_intersection_graph(diagonal_pattern(6))
        assert not adj.any()

    def test_banded_adjacency_matches_support_overlap(self):
        """Columns i, j of a banded pattern overlap iff 0 < |i - j| <= 2b."""
        d, b = 20, 2
        adj = column_intersection_graph(banded_pattern(d, b))
        for i in range(d):
            for j in range(d):
                assert adj[i, j] == (0 < abs(i - j) <= 2 * b)

    def test_hard_pattern_gives_complete_graph(self):
        adj = column_intersection_graph(hard_coloring_pattern(3))
        expected = ~np.eye(9, dtype=bool)
        npt.assert_array_equal(adj, expected)


class TestGreedyColoring:
    def test_empty_graph_uses_one_color(self):
        c = greedy_coloring(np.zeros((5, 5), dtype=bool))
        assert c.n_colors == 1

    def test_banded_natural_order_uses_bandwidth_colors(self):
        adj = column_intersection_graph(banded_pattern(100, 2))
        assert greedy_coloring(adj, order="natural").n_colors == 5

    def test_hard_pattern_needs_all_columns(self):
        for k in range(2, 9):
            adj = column_intersection_graph(hard_coloring_pattern(k))
            for order in ("natural", "degree"):
                assert greedy_coloring(adj, order=order).n_colors == k * k

    def test_colorings_are_valid(self):
        for S in (banded_pattern(30, 3), hard_coloring_pattern(4)):
            adj = column_intersection_graph(S)
            for order in ("natural", "degree"):
                validate_coloring(S, greedy_coloring(adj, order=order))

    def test_unknown_order_rejected(self):
        with pytest.raises(ValueError):
            greedy_coloring(np.zeros((2, 2), dtype=bool), order="random")

    def test_contiguous_color_range_enforced(self):
        with pytest.raises(ValueError):
            Coloring(n_cols=3, color_of=np.array([0, 2, 2]), n_colors=3)


class TestValidateColoring:
    def test_rejects_shared_color_in_a_row(self):
        S = banded_pattern(6, 1)
        bad = Coloring(n_cols=6, color_of=np.zeros(6, dtype=np.int64), n_colors=1)
        with pytest.raises(ValueError):
            validate_coloring(S, bad)

    def test_rejects_wrong_column_count(self):
        c = Coloring(n_cols=4, color_of=np.arange(4), n_colors=4)
        with pytest.raises(ValueError):
            validate_coloring(diagonal_pattern(5), c)


class TestExactRecoverByColoring:
    def test_diagonal_matrix_with_one_query(self):
        A = np.diag([3.0, -1.0, 2.0])
        S = diagonal_pattern(3)
        coloring = greedy_coloring(column_intersection_graph(S))
        assert coloring.n_colors == 1
        o = CountingOracle(DenseOracle(A))
        res = exact_recover_by_coloring(o, S, coloring)
        npt.assert_array_equal(res.approx.values, [3.0, -1.0, 2.0])
        assert o.counter.count == 1 == res.queries_used

    def test_banded_matrix_exact(self):
        d, b = 60, 1
        S = banded_pattern(d, b)
        vals = gaussian_matrix(1, S.nnz, RandomSeed(1)).ravel()
        A = SparseApprox(S, vals).to_dense()
        coloring = greedy_coloring(column_intersection_graph(S))
        assert coloring.n_colors == 3
        res = exact_recover_by_coloring(DenseOracle(A), S, coloring)
        assert np.abs(res.approx.values - vals).max() <= 1e-12

    def test_off_pattern_mass_contaminates_raw_reads(self):
        """With off-pattern entries the probe returns the raw color reads,
        here full row sums for a one-color diagonal probe."""
        A = np.arange(9.0).reshape(3, 3) + 1.0
        S = diagonal_pattern(3)
        coloring = Coloring(n_cols=3, color_of=np.zeros(3, dtype=np.int64), n_colors=1)
        res = exact_recover_by_coloring(DenseOracle(A), S, coloring)
        npt.assert_array_equal(res.approx.values, A.sum(axis=1))

    def test_invalid_coloring_rejected(self):
        S = banded_pattern(6, 1)
        bad = Coloring(n_cols=6, color_of=np.zeros(6, dtype=np.int64), n_colors=1)
        with pytest.raises(ValueError):
            exact_recover_by_coloring(DenseOracle(np.eye(6)), S, bad)


class TestProbingVersusSketching:
    def test_hard_pattern_colors_square_but_sketch_width_linear(self):
        """Probing needs k^2 queries on the adversarial pattern while the
        sketch recovers exactly from 2k - 1."""
        for k in range(2, 9):
            S = hard_coloring_pattern(k)
            s = 2 * k - 1
            coloring = greedy_coloring(column_intersection_graph(S))
            assert coloring.n_colors == k * k
            vals = gaussian_matrix(1, S.nnz, RandomSeed(2, k)).ravel()
            A = SparseApprox(S, vals).to_dense()
            res = fixed_sparse_recover(DenseOracle(A), S, s, RandomSeed(3, k))
            rel = np.linalg.norm(res.approx.values - vals) / np.linalg.norm(vals)
            assert rel <= 1e-10


class TestBandedRademacherEstimate:
    def test_exact_on_pattern_matrix_single_repetition(self):
        d, b = 30, 2
        S = banded_pattern(d, b)
        vals = gaussian_matrix(1, S.nnz, RandomSeed(4)).ravel()
        A = SparseApprox(S, vals).to_dense()
        res = banded_rademacher_estimate(DenseOracle(A), d, b, 1, RandomSeed(5))
        npt.assert_allclose(res.approx.values, vals, atol=1e-12)

    def test_query_accounting(self):
        d, b, t = 30, 1, 4
        o = CountingOracle(DenseOracle(gaussian_matrix(d, d, RandomSeed(6))))
        res = banded_rademacher_estimate(o, d, b, t, RandomSeed(7))
        assert res.queries_used == (2 * b + 1) * t == o.counter.count
        assert o.counter.calls == t

    def test_unbiasedness(self):
        """Slot sample means track the banded restriction within a CLT band."""
        d, b, trials = 15, 1, 500
        S = banded_pattern(d, b)
        A = gaussian_matrix(d, d, RandomSeed(8))
        true = hadamard_mask(A, S).values
        o = DenseOracle(A)
        est = np.empty((trials, S.nnz))
        for k in range(trials):
            est[k] = banded_rademacher_estimate(o, d, b, 1, RandomSeed(9, k)).approx.values
        dev = np.abs(est.mean(axis=0) - true)
        band = 4.0 * est.std(axis=0, ddof=1) / np.sqrt(trials)
        assert np.mean(dev <= band) >= 0.95

    def test_variance_drops_with_repetitions(self):
        d, b, trials = 30, 1, 400
        S = banded_pattern(d, b)
        A = gaussian_matrix(d, d, RandomSeed(10))
        true = hadamard_mask(A, S)
        off2 = frobenius_norm(A - true.to_dense()) ** 2
        o = DenseOracle(A)
        ratios = {}
        for t in (1, 4):
            total = 0.0
            for k in range(trials):
                res = banded_rademacher_estimate(o, d, b, t, RandomSeed(11, k))
                total += np.sum((true.values - res.approx.values) ** 2)
            ratios[t] = total / trials / off2
        assert abs(ratios[1] - 1.0) <= 0.2
        assert abs(ratios[4] - 0.25) <= 0.05

    def test_nondividing_dimension_rejected(self):
        with pytest.raises(ValueError):
            banded_rademacher_estimate(DenseOracle(np.eye(10)), 10, 1, 1, RandomSeed(0))

    def test_zero_repetitions_rejected(self):
        with pytest.raises(ValueError):
            banded_rademacher_estimate(DenseOracle(np.eye(9)), 9, 1, 0, RandomSeed(0))
