import numpy as np
import numpy.testing as npt
import pytest

import sparsesketch.recover
from sparsesketch import (
    CountingOracle,
    DenseOracle,
    InsufficientQueriesError,
    RandomSeed,
    SparseApprox,
    SparsityPattern,
    UndefinedEstimateError,
    banded_pattern,
    boosted_recover,
    circulant_band_pattern,
    diagonal_pattern,
    fixed_sparse_recover,
    frobenius_norm,
    gaussian_matrix,
    hadamard_mask,
    hutchinson_diagonal,
    median_distance_selection,
    recover_from_sketch,
)


def banded_ground_truth(d, b, seed):
    """A random matrix supported exactly on a banded pattern."""
    S = banded_pattern(d, b)
    vals = gaussian_matrix(1, S.nnz, RandomSeed(seed)).ravel()
    return S, vals, SparseApprox(S, vals).to_dense()


class TestRecoverFromSketch:
    def test_empty_pattern_gives_zeros(self):
        S = SparsityPattern.from_rows(3, 3, [[], [], []])
        G = gaussian_matrix(3, 2, RandomSeed(0))
        out = recover_from_sketch(G, np.zeros((3, 2)), S)
        assert out.values.size == 0

    def test_exact_on_pattern_matrix(self):
        """A matrix supported on the pattern is recovered from m = s queries."""
        S, vals, A = banded_ground_truth(30, 2, seed=1)
        G = gaussian_matrix(30, S.max_row_nnz(), RandomSeed(2))
        out = recover_from_sketch(G, A @ G, S)
        assert np.linalg.norm(out.values - vals) <= 1e-10 * np.linalg.norm(vals)

    def test_diagonal_matches_scalar_closed_form(self):
        """At the diagonal pattern each row reduces to <g_i, z_i>/<g_i, g_i>."""
        d, m = 3, 4
        A = gaussian_matrix(d, d, RandomSeed(3))
        G = gaussian_matrix(d, m, RandomSeed(4))
        Z = A @ G
        out = recover_from_sketch(G, Z, diagonal_pattern(d))
        expected = np.array([G[i] @ Z[i] / (G[i] @ G[i]) for i in range(d)])
        npt.assert_allclose(out.values, expected, atol=1e-13)

    def test_insufficient_width_names_row(self):
        S = SparsityPattern.from_rows(3, 4, [[0], [0, 1, 2], [3]])
        G = gaussian_matrix(4, 2, RandomSeed(5))
        with pytest.raises(InsufficientQueriesError) as excinfo:
            recover_from_sketch(G, np.zeros((3, 2)), S)
        assert excinfo.value.row == 1

    def test_shape_mismatches_rejected(self):
        S = diagonal_pattern(3)
        G = gaussian_matrix(3, 2, RandomSeed(6))
        with pytest.raises(ValueError):
            recover_from_sketch(G, np.zeros((4, 2)), S)
        with pytest.raises(ValueError):
            recover_from_sketch(gaussian_matrix(4, 2, RandomSeed(7)), np.zeros((3, 2)), S)
        with pytest.raises(ValueError):
            recover_from_sketch(G, np.zeros((3, 3)), S)

    def test_deterministic_function_of_inputs(self):
        S = banded_pattern(10, 1)
        G = gaussian_matrix(10, 5, RandomSeed(8))
        Z = gaussian_matrix(10, 5, RandomSeed(9))
        a = recover_from_sketch(G, Z, S)
        b = recover_from_sketch(G, Z, S)
        npt.assert_array_equal(a.values, b.values)


class TestFixedSparseRecover:
    def test_exact_recovery_at_minimum_width(self):
        S, vals, A = banded_ground_truth(100, 2, seed=11)
        res = fixed_sparse_recover(DenseOracle(A), S, 5, RandomSeed(1))
        rel = np.linalg.norm(vals - res.approx.values) / np.linalg.norm(vals)
        assert rel <= 1e-10

    def test_result_reuses_input_pattern(self):
        S, _, A = banded_ground_truth(10, 1, seed=12)
        res = fixed_sparse_recover(DenseOracle(A), S, 4, RandomSeed(2))
        assert res.approx.pattern is S
        assert res.queries_used == res.m == 4

    def test_single_query_block(self):
        """All m sketch vectors go to the oracle in one non-adaptive block."""
        S, _, A = banded_ground_truth(10, 1, seed=13)
        o = CountingOracle(DenseOracle(A))
        fixed_sparse_recover(o, S, 6, RandomSeed(3))
        assert o.counter.calls == 1
        assert o.counter.count == 6

    def test_expected_error_ratio_on_exact_degree_pattern(self):
        """Monte Carlo squared-error ratio approaches s/(m-s-1) when every
        row has exactly s slots."""
        d, b, m, trials = 40, 1, 10, 300
        S = circulant_band_pattern(d, b)
        A = gaussian_matrix(d, d, RandomSeed(123))
        true = hadamard_mask(A, S)
        off2 = frobenius_norm(A - true.to_dense()) ** 2
        oracle = DenseOracle(A)
        total = 0.0
        for t in range(trials):
            res = fixed_sparse_recover(oracle, S, m, RandomSeed(42, t))
            total += np.sum((true.values - res.approx.values) ** 2) / off2
        ratio = total / trials
        assert abs(ratio - 0.5) <= 0.05  # 10% of the target 0.5

    def test_error_ratio_below_formula_on_truncated_band(self):
        """Edge rows of a plain band have fewer slots, so the Monte Carlo
        squared-error ratio stays below s/(m-s-1)."""
        d, b, m, trials = 40, 1, 10, 400
        S = banded_pattern(d, b)
        A = gaussian_matrix(d, d, RandomSeed(200))
        true = hadamard_mask(A, S)
        off2 = frobenius_norm(A - true.to_dense()) ** 2
        oracle = DenseOracle(A)
        total = 0.0
        for t in range(trials):
            res = fixed_sparse_recover(oracle, S, m, RandomSeed(201, t))
            total += np.sum((true.values - res.approx.values) ** 2) / off2
        ratio = total / trials
        assert ratio <= 0.5 * 1.1  # formula value plus sampling slack

    def test_failure_probability_within_budgeted_width(self):
        """At m = s(1/(2*delta*eps) + 1) + 1 with delta=0.1, eps=0.5, the
        fraction of trials exceeding (1+eps) times the off-pattern mass
        stays at most 0.15 over 1000 trials."""
        d, b = 40, 1
        S = circulant_band_pattern(d, b)
        s = S.max_row_nnz()
        delta, eps = 0.1, 0.5
        m = int(s * (1.0 / (2.0 * delta * eps) + 1.0)) + 1
        A = gaussian_matrix(d, d, RandomSeed(555))
        true = hadamard_mask(A, S)
        off = frobenius_norm(A - true.to_dense())
        oracle = DenseOracle(A)
        failures = 0
        for t in range(1000):
            res = fixed_sparse_recover(oracle, S, m, RandomSeed(202, t))
            approx_err = frobenius_norm(A - res.approx.to_dense())
            failures += approx_err > (1.0 + eps) * off
        assert failures / 1000 <= 0.15

    def test_slotwise_unbiasedness(self):
        """Slot sample means track the true restriction within a CLT band."""
        d, b, m, trials = 20, 1, 8, 400
        S = circulant_band_pattern(d, b)
        A = gaussian_matrix(d, d, RandomSeed(55))
        true = hadamard_mask(A, S).values
        oracle = DenseOracle(A)
        est = np.empty((trials, S.nnz))
        for t in range(trials):
            est[t] = fixed_sparse_recover(oracle, S, m, RandomSeed(77, t)).approx.values
        dev = np.abs(est.mean(axis=0) - true)
        band = 4.0 * est.std(axis=0, ddof=1) / np.sqrt(trials)
        assert np.mean(dev <= band) >= 0.95

    def test_insufficient_width_rejected_before_query(self):
        S, _, A = banded_ground_truth(10, 2, seed=14)
        o = CountingOracle(DenseOracle(A))
        with pytest.raises(InsufficientQueriesError):
            fixed_sparse_recover(o, S, 3, RandomSeed(4))
        assert o.counter.count == 0

    def test_oracle_pattern_shape_mismatch(self):
        with pytest.raises(ValueError):
            fixed_sparse_recover(DenseOracle(np.eye(4)), diagonal_pattern(3), 2, RandomSeed(0))


class TestSymmetrize:
    def test_requires_symmetric_pattern(self):
        S = SparsityPattern.from_rows(2, 2, [[1], []])
        with pytest.raises(ValueError):
            fixed_sparse_recover(DenseOracle(np.eye(2)), S, 2, RandomSeed(0), symmetrize=True)

    def test_averages_mirror_slots(self):
        d, b, m = 12, 1, 6
        S = banded_pattern(d, b)
        A = gaussian_matrix(d, d, RandomSeed(21))
        A = 0.5 * (A + A.T)
        plain = fixed_sparse_recover(DenseOracle(A), S, m, RandomSeed(5))
        sym = fixed_sparse_recover(DenseOracle(A), S, m, RandomSeed(5), symmetrize=True)
        expected = 0.5 * (plain.approx.to_dense() + plain.approx.to_dense().T)
        npt.assert_allclose(sym.approx.to_dense(), expected, atol=1e-14)
        dense_sym = sym.approx.to_dense()
        npt.assert_allclose(dense_sym, dense_sym.T, atol=1e-14)


class TestHutchinsonDiagonal:
    def test_identity_gives_ones(self):
        for dist in ("gaussian", "rademacher"):
            est = hutchinson_diagonal(DenseOracle(np.eye(5)), 3, dist, RandomSeed(1))
            npt.assert_array_equal(est, np.ones(5))

    def test_matches_sketch_recovery_at_diagonal_pattern(self):
        """With shared Gaussian draws the probe estimate and the sketch
        recovery at the identity pattern coincide."""
        d, m = 16, 8
        A = gaussian_matrix(d, d, RandomSeed(31))
        oracle = DenseOracle(A)
        alg = fixed_sparse_recover(oracle, diagonal_pattern(d), m, RandomSeed(6))
        est = hutchinson_diagonal(oracle, m, "gaussian", RandomSeed(6))
        npt.assert_allclose(est, alg.approx.values, atol=1e-12)

    def test_rademacher_single_probe_on_diagonal_matrix(self):
        A = np.diag([1.0, 2.0, 3.0])
        est = hutchinson_diagonal(DenseOracle(A), 1, "rademacher", RandomSeed(7))
        npt.assert_array_equal(est, [1.0, 2.0, 3.0])

    def test_square_oracle_required(self):
        with pytest.raises(ValueError):
            hutchinson_diagonal(DenseOracle(np.ones((2, 3))), 2, "gaussian", RandomSeed(0))

    def test_unknown_distribution_rejected(self):
        with pytest.raises(ValueError):
            hutchinson_diagonal(DenseOracle(np.eye(2)), 2, "uniform", RandomSeed(0))

    def test_zero_probe_mass_detected(self, monkeypatch):
        monkeypatch.setattr(
            sparsesketch.recover, "gaussian_matrix", lambda n, m, seed: np.zeros((n, m))
        )
        with pytest.raises(UndefinedEstimateError) as excinfo:
            hutchinson_diagonal(DenseOracle(np.eye(3)), 2, "gaussian", RandomSeed(0))
        assert excinfo.value.entry == 0


class TestMedianDistanceSelection:
    def test_two_close_one_far(self):
        """With distances (0, 0, 10) the first of the close pair wins."""
        idx, scores = median_distance_selection([np.zeros(2), np.zeros(2), np.full(2, 10.0)])
        assert idx == 0
        npt.assert_allclose(scores, [0.0, 0.0, np.sqrt(200.0)])

    def test_order_statistic_includes_self_distance(self):
        """B_i is the ceil(r/2)-th smallest over all r distances, with
        d_ii = 0 counted."""
        candidates = [np.array([0.0]), np.array([1.0]), np.array([3.0]), np.array([7.0])]
        _, scores = median_distance_selection(candidates)
        # r = 4 -> 2nd smallest of each sorted distance row
        npt.assert_allclose(scores, [1.0, 1.0, 2.0, 4.0])

    def test_tie_breaks_to_lowest_index(self):
        idx, _ = median_distance_selection([np.array([5.0]), np.array([5.0])])
        assert idx == 0

    def test_single_candidate(self):
        idx, scores = median_distance_selection([np.array([2.0, 3.0])])
        assert idx == 0 and scores[0] == 0.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            median_distance_selection([])


class TestBoostedRecover:
    def test_r_one_matches_plain_with_derived_substream(self):
        S, _, A = banded_ground_truth(15, 1, seed=41)
        o = DenseOracle(A)
        boosted = boosted_recover(o, S, 5, 1, RandomSeed(9, 100))
        plain = fixed_sparse_recover(o, S, 5, RandomSeed(9, 100))
        npt.assert_array_equal(boosted.approx.values, plain.approx.values)

    def test_output_is_bitwise_one_of_the_candidates(self):
        S, _, A = banded_ground_truth(15, 1, seed=42)
        o = DenseOracle(A)
        seed = RandomSeed(13)
        r, m = 5, 5
        boosted = boosted_recover(o, S, m, r, seed)
        candidates = [
            fixed_sparse_recover(o, S, m, seed.child(j)).approx.values for j in range(r)
        ]
        assert any(np.array_equal(boosted.approx.values, c) for c in candidates)

    def test_query_accounting(self):
        S, _, A = banded_ground_truth(15, 1, seed=43)
        o = CountingOracle(DenseOracle(A))
        res = boosted_recover(o, S, 4, 6, RandomSeed(14))
        assert res.queries_used == 24 == o.counter.count

    def test_zero_candidates_rejected(self):
        S, _, A = banded_ground_truth(15, 1, seed=44)
        with pytest.raises(ValueError):
            boosted_recover(DenseOracle(A), S, 4, 0, RandomSeed(0))
