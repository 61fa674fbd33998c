import numpy as np
import pytest

from tripmd import (
    BEHAVIOR_ORDER,
    Assignment,
    Behavior,
    ClusterBehaviorRates,
    Motif,
    Route,
    SubseqRef,
    TripRecording,
    ValidationError,
    bootstrap_scores,
    cluster_rates,
    score_trips,
    subsequence_counts,
    trip_scores,
)


def _trip(trip_id, behavior, driver="d1"):
    return TripRecording(trip_id, driver, Route.MOTORWAY, behavior, 5.0,
                         ("x",), np.zeros((300, 1)))


def _motif(occurrences, pattern=((1,), (2,))):
    center, *members = [SubseqRef(t, s, e) for t, s, e in occurrences]
    return Motif(pattern=pattern, center=center, members=tuple(members),
                 mean_member_distance=0.0, center_values=np.zeros((5, 1)))


def test_behavior_order_is_frozen():
    assert BEHAVIOR_ORDER == (Behavior.AGGRESSIVE, Behavior.DROWSY,
                              Behavior.NORMAL)


class TestSubsequenceCounts:
    def test_counts_every_occurrence_once(self):
        trips = [_trip("a", Behavior.NORMAL), _trip("b", Behavior.DROWSY)]
        motifs = [
            _motif([("a", 0, 5), ("a", 10, 15), ("b", 0, 5)]),
            _motif([("b", 50, 55), ("b", 60, 65)], pattern=((3,), (4,))),
        ]
        counts = subsequence_counts(Assignment((0, 2)), motifs, trips)
        assert counts == {(0, "a"): 2, (0, "b"): 1, (2, "b"): 2}

    def test_unknown_trip_rejected(self):
        trips = [_trip("a", Behavior.NORMAL)]
        motifs = [_motif([("a", 0, 5), ("ghost", 0, 5)])]
        with pytest.raises(ValidationError):
            subsequence_counts(Assignment((0,)), motifs, trips)

    def test_length_mismatch_rejected(self):
        trips = [_trip("a", Behavior.NORMAL)]
        motifs = [_motif([("a", 0, 5), ("a", 10, 15)])]
        with pytest.raises(ValidationError):
            subsequence_counts(Assignment((0, 1)), motifs, trips)


class TestClusterRates:
    def test_rows_normalize_and_zero_rows_stay_zero(self):
        counts = {(0, "agg"): 3, (0, "norm"): 1, (2, "norm"): 4}
        training = [_trip("agg", Behavior.AGGRESSIVE),
                    _trip("norm", Behavior.NORMAL)]
        rates = cluster_rates(counts, training, n_units=3)
        assert rates.n_units == 3
        assert np.allclose(rates.rates[0], [0.75, 0.0, 0.25])
        assert np.array_equal(rates.rates[1], [0.0, 0.0, 0.0])
        assert np.allclose(rates.rates[2], [0.0, 0.0, 1.0])
        assert np.array_equal(rates.totals, [4.0, 0.0, 4.0])

    def test_unlabeled_training_trip_rejected(self):
        with pytest.raises(ValidationError):
            cluster_rates({}, [_trip("a", None)], n_units=1)

    def test_counts_from_unlisted_trips_ignored(self):
        counts = {(0, "test"): 100, (0, "agg"): 1}
        rates = cluster_rates(counts, [_trip("agg", Behavior.AGGRESSIVE)],
                              n_units=1)
        assert np.allclose(rates.rates[0], [1.0, 0.0, 0.0])
        assert rates.totals[0] == 1.0

    def test_needs_units(self):
        with pytest.raises(ValidationError):
            cluster_rates({}, [], n_units=0)

    def test_rates_shape_validated(self):
        with pytest.raises(ValidationError):
            ClusterBehaviorRates(rates=np.zeros((2, 2)), totals=np.zeros(2))
        with pytest.raises(ValidationError):
            ClusterBehaviorRates(rates=np.zeros((2, 3)), totals=np.zeros(3))


class TestTripScores:
    def _rates(self, rows):
        rows = np.asarray(rows, dtype=float)
        return ClusterBehaviorRates(rates=rows,
                                    totals=rows.sum(axis=1) * 10)

    def test_scores_are_rate_weighted_counts(self):
        rates = self._rates([[1.0, 0.0, 0.0], [0.0, 0.5, 0.5]])
        score = trip_scores(rates, np.array([2.0, 4.0]), "t")
        assert score.scores[Behavior.AGGRESSIVE] == pytest.approx(2.0)
        assert score.scores[Behavior.DROWSY] == pytest.approx(2.0)
        assert score.scores[Behavior.NORMAL] == pytest.approx(2.0)

    def test_additive_in_counts(self):
        rng = np.random.default_rng(15)
        raw = rng.random((4, 3))
        rates = self._rates(raw / raw.sum(axis=1, keepdims=True))
        c1 = rng.integers(0, 5, 4).astype(float)
        c2 = rng.integers(0, 5, 4).astype(float)
        s1 = trip_scores(rates, c1, "t").scores
        s2 = trip_scores(rates, c2, "t").scores
        s12 = trip_scores(rates, c1 + c2, "t").scores
        for b in BEHAVIOR_ORDER:
            assert s12[b] == pytest.approx(s1[b] + s2[b], abs=1e-9)

    def test_zero_evidence_is_indeterminate(self):
        rates = self._rates([[1.0, 0.0, 0.0]])
        score = trip_scores(rates, np.array([0.0]), "t")
        assert score.predicted is None
        assert score.indeterminate

    def test_tie_prefers_aggressive_then_drowsy(self):
        rates = self._rates([[0.5, 0.5, 0.0]])
        assert trip_scores(rates, np.array([2.0]), "t").predicted is Behavior.AGGRESSIVE
        rates = self._rates([[0.0, 0.5, 0.5]])
        assert trip_scores(rates, np.array([2.0]), "t").predicted is Behavior.DROWSY

    def test_counts_shape_validated(self):
        rates = self._rates([[1.0, 0.0, 0.0]])
        with pytest.raises(ValidationError):
            trip_scores(rates, np.array([1.0, 2.0]), "t")


class TestScoreTrips:
    def _setup(self):
        trips = [_trip("agg", Behavior.AGGRESSIVE),
                 _trip("norm", Behavior.NORMAL),
                 _trip("test", Behavior.AGGRESSIVE)]
        motifs = [
            _motif([("agg", 0, 5), ("agg", 10, 15), ("test", 0, 5)]),
            _motif([("norm", 0, 5), ("norm", 10, 15)], pattern=((3,), (4,))),
        ]
        assignment = Assignment((0, 1))
        return trips, motifs, assignment

    def test_test_trip_scored_from_training_rates(self):
        trips, motifs, assignment = self._setup()
        rates, scores = score_trips(motifs, assignment, trips, {"test"},
                                    n_units=2)
        assert np.allclose(rates.rates[0], [1.0, 0.0, 0.0])
        assert np.allclose(rates.rates[1], [0.0, 0.0, 1.0])
        assert len(scores) == 1
        assert scores[0].trip_id == "test"
        assert scores[0].predicted is Behavior.AGGRESSIVE
        assert scores[0].scores[Behavior.AGGRESSIVE] == pytest.approx(1.0)

    def test_test_trips_excluded_from_training(self):
        trips, motifs, assignment = self._setup()
        rates, _ = score_trips(motifs, assignment, trips, {"test"}, n_units=2)
        # unit 0 saw 2 training subsequences; the test occurrence is not one
        assert rates.totals[0] == 2.0

    def test_unlabeled_test_trip_allowed(self):
        trips, motifs, assignment = self._setup()
        trips[2] = _trip("test", None)
        rates, scores = score_trips(motifs, assignment, trips, {"test"},
                                    n_units=2)
        assert scores[0].predicted is Behavior.AGGRESSIVE

    def test_multiple_test_trips_sorted(self):
        trips, motifs, assignment = self._setup()
        trips.append(_trip("aaa", None))
        _, scores = score_trips(motifs, assignment, trips, {"test", "aaa"},
                                n_units=2)
        assert [s.trip_id for s in scores] == ["aaa", "test"]
        assert scores[0].indeterminate


class TestBootstrapScores:
    def _setup(self):
        trips = [_trip("agg", Behavior.AGGRESSIVE),
                 _trip("norm", Behavior.NORMAL),
                 _trip("test", None)]
        motifs = [
            _motif([("agg", 0, 5), ("test", 0, 5)]),
            _motif([("norm", 0, 5), ("norm", 10, 15)], pattern=((3,), (4,))),
            _motif([("agg", 20, 25), ("test", 20, 25)], pattern=((2,), (3,))),
        ]
        assignment = Assignment((0, 1, 0))
        return trips, motifs, assignment

    def test_deterministic_per_seed(self):
        trips, motifs, assignment = self._setup()
        kwargs = dict(trips=trips, test_trip_ids={"test"}, n_units=2,
                      n_samples=10, seed=3)
        a = bootstrap_scores(motifs, assignment, **kwargs)
        b = bootstrap_scores(motifs, assignment, **kwargs)
        assert a == b

    def test_single_motif_has_zero_spread(self):
        trips = [_trip("agg", Behavior.AGGRESSIVE), _trip("test", None)]
        motifs = [_motif([("agg", 0, 5), ("test", 0, 5)])]
        assignment = Assignment((0,))
        out = bootstrap_scores(motifs, assignment, trips, {"test"},
                               n_units=1, n_samples=5)
        mean, std = out["test"][Behavior.AGGRESSIVE]
        assert mean == pytest.approx(1.0)
        assert std == pytest.approx(0.0)

    def test_reports_all_behaviors_per_trip(self):
        trips, motifs, assignment = self._setup()
        out = bootstrap_scores(motifs, assignment, trips, {"test"},
                               n_units=2, n_samples=4)
        assert set(out) == {"test"}
        assert set(out["test"]) == set(BEHAVIOR_ORDER)

    def test_needs_rounds_and_motifs(self):
        trips, motifs, assignment = self._setup()
        with pytest.raises(ValidationError):
            bootstrap_scores(motifs, assignment, trips, {"test"}, 2,
                             n_samples=0)
        with pytest.raises(ValidationError):
            bootstrap_scores([], Assignment(()), trips, {"test"}, 2,
                             n_samples=1)
