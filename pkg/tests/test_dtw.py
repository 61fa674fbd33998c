import numpy as np
import pytest

from oracles import dtw_reference
from tripmd import DtwConfig, ValidationError, alignment_path, dtw, pairwise_dtw, widened


def _col(values):
    return np.asarray(values, dtype=float)[:, None]


class TestDtwConfig:
    def test_window_must_be_non_negative(self):
        with pytest.raises(ValidationError):
            DtwConfig(window=-1)

    def test_none_means_unconstrained(self):
        a = _col([0.0, 5.0, 0.0])
        b = _col([0.0, 0.0, 5.0, 0.0, 0.0])
        assert dtw(a, b, DtwConfig(window=None)) == pytest.approx(
            dtw(a, b, DtwConfig(window=100)), abs=1e-12)

    def test_widened_covers_length_difference(self):
        cfg = DtwConfig(window=1)
        assert widened(cfg, 10, 14).window == 4
        assert widened(cfg, 14, 10).window == 4
        assert widened(cfg, 10, 11) is cfg
        assert widened(DtwConfig(window=None), 3, 99).window is None


class TestDtwFrozenValues:
    def test_classic_three_vs_two(self):
        # alignment: 0-0, 1-2 (cost 1), 2-2; total 1
        assert dtw(_col([0.0, 1.0, 2.0]), _col([0.0, 2.0])) == pytest.approx(1.0)

    def test_single_pair_euclidean(self):
        a = np.array([[0.0, 0.0]])
        b = np.array([[3.0, 4.0]])
        assert dtw(a, b) == pytest.approx(5.0)

    def test_window_zero_is_pointwise_sum(self):
        a = _col([0.0, 1.0, 4.0])
        b = _col([1.0, 3.0, 0.0])
        assert dtw(a, b, DtwConfig(window=0)) == pytest.approx(1 + 2 + 4)

    def test_accepts_plain_lists(self):
        assert dtw([0.0, 1.0, 2.0], [0.0, 2.0]) == pytest.approx(1.0)


class TestDtwProperties:
    def test_identity_is_zero(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(12, 2))
        assert dtw(a, a) == 0.0

    def test_symmetry(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=(9, 2))
        b = rng.normal(size=(13, 2))
        cfg = DtwConfig(window=6)
        assert dtw(a, b, cfg) == pytest.approx(dtw(b, a, cfg), abs=1e-12)

    def test_window_monotonicity(self):
        rng = np.random.default_rng(2)
        a = rng.normal(size=(20, 2))
        b = rng.normal(size=(20, 2))
        dists = [dtw(a, b, DtwConfig(window=w)) for w in (0, 1, 3, 8, 19)]
        for tighter, looser in zip(dists, dists[1:]):
            assert looser <= tighter + 1e-12

    def test_matches_reference_on_random_pairs(self):
        rng = np.random.default_rng(6)
        for _ in range(25):
            la, lb = rng.integers(2, 15, size=2)
            d = int(rng.integers(1, 4))
            a = rng.normal(size=(la, d))
            b = rng.normal(size=(lb, d))
            w = int(rng.integers(abs(int(la) - int(lb)), 16))
            got = dtw(a, b, DtwConfig(window=w))
            want = dtw_reference(a, b, window=w)
            assert got == pytest.approx(want, abs=1e-9)

    def test_channel_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            dtw(np.zeros((3, 1)), np.zeros((3, 2)))

    def test_window_narrower_than_length_gap_rejected(self):
        with pytest.raises(ValidationError):
            dtw(np.zeros((3, 1)), np.zeros((8, 1)), DtwConfig(window=2))

    def test_empty_sequence_rejected(self):
        with pytest.raises(ValidationError):
            dtw(np.zeros((0, 1)), np.zeros((3, 1)))


class TestAlignmentPath:
    def test_endpoints_and_monotonicity(self):
        rng = np.random.default_rng(9)
        a = rng.normal(size=(8, 2))
        b = rng.normal(size=(11, 2))
        dist, path = alignment_path(a, b, DtwConfig(window=None))
        assert path[0] == (0, 0)
        assert path[-1] == (7, 10)
        for (i0, j0), (i1, j1) in zip(path, path[1:]):
            assert (i1 - i0, j1 - j0) in {(0, 1), (1, 0), (1, 1)}

    def test_path_cost_equals_distance(self):
        rng = np.random.default_rng(10)
        a = rng.normal(size=(7, 2))
        b = rng.normal(size=(9, 2))
        dist, path = alignment_path(a, b, DtwConfig(window=4))
        cost = sum(float(np.linalg.norm(a[i] - b[j])) for i, j in path)
        assert cost == pytest.approx(dist, abs=1e-9)
        assert dist == pytest.approx(dtw(a, b, DtwConfig(window=4)), abs=1e-12)

    def test_respects_band(self):
        rng = np.random.default_rng(11)
        a = rng.normal(size=(10, 1))
        b = rng.normal(size=(10, 1))
        _, path = alignment_path(a, b, DtwConfig(window=2))
        assert all(abs(i - j) <= 2 for i, j in path)


class TestPairwiseDtw:
    def test_symmetric_zero_diagonal(self):
        rng = np.random.default_rng(12)
        seqs = [rng.normal(size=(int(rng.integers(4, 9)), 2)) for _ in range(5)]
        m = pairwise_dtw(seqs, DtwConfig(window=None))
        assert m.shape == (5, 5)
        assert np.array_equal(m, m.T)
        assert np.all(np.diag(m) == 0.0)

    def test_entries_match_direct_calls(self):
        rng = np.random.default_rng(13)
        seqs = [rng.normal(size=(6, 1)) for _ in range(4)]
        cfg = DtwConfig(window=3)
        m = pairwise_dtw(seqs, cfg)
        for i in range(4):
            for j in range(i + 1, 4):
                assert m[i, j] == pytest.approx(dtw(seqs[i], seqs[j], cfg),
                                                abs=1e-12)

    def test_infeasible_pair_named_in_error(self):
        seqs = [np.zeros((3, 1)), np.zeros((9, 1))]
        with pytest.raises(ValidationError) as err:
            pairwise_dtw(seqs, DtwConfig(window=1))
        assert "pair (0, 1)" in str(err.value)
