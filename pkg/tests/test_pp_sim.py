"""Point-process Monte Carlo: sampling, exact filters, estimates, coarsening."""

import math

import numpy as np
import pytest

import poischan.ct_models as ct
from poischan.priors import DiscretePrior, JointPrior
from poischan.pp_sim import (
    McEstimate,
    PiecewiseSignalModel,
    PointProcessPath,
    coarsen,
    mc_estimate,
    posterior_mean_at,
    sample_path,
)
from poischan.scalar_channel import mutual_information, posterior_mean

BIN_TRUTH = JointPrior([((0.0,), 0.5), ((1.0,), 0.5)])
BIN_BELIEF = JointPrior([((0.0,), 0.8), ((1.0,), 0.2)])
BIN_MODEL = PiecewiseSignalModel([0.0, 1.0], BIN_TRUTH)


class TestModelAndPath:
    def test_breakpoints_validation(self):
        with pytest.raises(ValueError):
            PiecewiseSignalModel([0.5, 1.0], JointPrior.delta([1.0]))
        with pytest.raises(ValueError):
            PiecewiseSignalModel([0.0, 1.0, 1.0], JointPrior.delta([1.0, 2.0]))
        with pytest.raises(ValueError):
            PiecewiseSignalModel([0.0, 1.0], JointPrior.delta([1.0, 2.0]))

    def test_path_validation(self):
        with pytest.raises(ValueError):
            PointProcessPath([0.0], 1.0)
        with pytest.raises(ValueError):
            PointProcessPath([0.5, 0.5], 1.0)
        with pytest.raises(ValueError):
            PointProcessPath([1.5], 1.0)
        path = PointProcessPath([0.9, 0.2], 1.0)
        assert path.events.tolist() == [0.2, 0.9]


class TestSamplePath:
    def test_zero_snr_gives_empty_path(self):
        for r in range(20):
            _, path = sample_path(BIN_MODEL, 0.0, 1, r)
            assert path.n_events == 0

    def test_deterministic_given_stream(self):
        a = sample_path(BIN_MODEL, 2.0, 123, 7)
        b = sample_path(BIN_MODEL, 2.0, 123, 7)
        assert a[0] == b[0]
        assert np.array_equal(a[1].events, b[1].events)
        c = sample_path(BIN_MODEL, 2.0, 123, 8)
        assert a[0] != c[0] or not np.array_equal(a[1].events, c[1].events)

    def test_mean_event_count(self):
        model = PiecewiseSignalModel([0.0, 1.0], JointPrior.delta([2.0]))
        n = 100_000
        counts = np.fromiter(
            (sample_path(model, 3.0, 99, r)[1].n_events for r in range(n)), dtype=float, count=n
        )
        se = math.sqrt(6.0 / n)
        assert abs(counts.mean() - 6.0) <= 3.0 * se

    def test_per_interval_counts_conditionally_independent(self):
        # degenerate prior: counts in the two intervals are independent Poissons
        model = PiecewiseSignalModel([0.0, 1.0, 2.0], JointPrior.delta([1.0, 3.0]))
        n = 30_000
        c1 = np.empty(n)
        c2 = np.empty(n)
        for r in range(n):
            _, path = sample_path(model, 1.0, 5, r)
            c1[r] = np.count_nonzero(path.events <= 1.0)
            c2[r] = path.n_events - c1[r]
        assert abs(c1.mean() - 1.0) <= 3.0 * math.sqrt(1.0 / n)
        assert abs(c2.mean() - 3.0) <= 3.0 * math.sqrt(3.0 / n)
        corr = np.corrcoef(c1, c2)[0, 1]
        assert abs(corr) <= 3.0 / math.sqrt(n)


class TestPosteriorMeanAt:
    def test_causal_no_event_formula(self):
        # believer mean with an empty window: p e^{-gt} / (1 - p + p e^{-gt})
        empty = PointProcessPath([], 1.0)
        for t in (0.2, 0.9):
            m = posterior_mean_at(BIN_MODEL, empty, 2.0, t, "causal")
            ref = 0.5 * math.exp(-2.0 * t) / (0.5 + 0.5 * math.exp(-2.0 * t))
            assert m == pytest.approx(ref, abs=1e-14)

    def test_causal_after_event_is_one(self):
        path = PointProcessPath([0.3], 1.0)
        assert posterior_mean_at(BIN_MODEL, path, 2.0, 0.5, "causal") == pytest.approx(1.0, abs=1e-14)

    def test_noncausal_depends_only_on_total_count(self):
        scalar_prior = BIN_TRUTH.as_scalar()
        for events in ([], [0.41], [0.2, 0.8, 0.85]):
            path = PointProcessPath(events, 1.0)
            for t in (0.1, 0.6):
                m = posterior_mean_at(BIN_MODEL, path, 2.0, t, "noncausal")
                assert m == pytest.approx(posterior_mean(scalar_prior, 2.0, len(events)), abs=1e-13)

    def test_filter_consistency_at_boundaries(self):
        path = PointProcessPath([0.25, 0.7], 1.0)
        non = posterior_mean_at(BIN_MODEL, path, 2.0, 0.5, "noncausal")
        assert posterior_mean_at(BIN_MODEL, path, 2.0, 1.0, "causal") == pytest.approx(non, abs=1e-13)
        assert posterior_mean_at(BIN_MODEL, path, 2.0, 0.0, "anticausal") == pytest.approx(non, abs=1e-13)

    def test_belief_override_runs_mismatched_filter(self):
        empty = PointProcessPath([], 1.0)
        m = posterior_mean_at(BIN_MODEL, empty, 2.0, 0.5, "causal", prior_override=BIN_BELIEF)
        ref = 0.2 * math.exp(-1.0) / (0.8 + 0.2 * math.exp(-1.0))
        assert m == pytest.approx(ref, abs=1e-14)

    def test_dimension_mismatch_rejected(self):
        empty = PointProcessPath([], 1.0)
        with pytest.raises(ValueError):
            posterior_mean_at(BIN_MODEL, empty, 2.0, 0.5, "causal",
                              prior_override=JointPrior.delta([1.0, 2.0]))

    def test_unexplainable_observation_raises(self):
        dead = JointPrior.delta([0.0])
        model = PiecewiseSignalModel([0.0, 1.0], BIN_TRUTH)
        path = PointProcessPath([0.5], 1.0)
        with pytest.raises(RuntimeError):
            posterior_mean_at(model, path, 2.0, 0.9, "causal", prior_override=dead)

    def test_bad_mode_rejected(self):
        with pytest.raises(ValueError):
            posterior_mean_at(BIN_MODEL, PointProcessPath([], 1.0), 1.0, 0.5, "sideways")


class TestMcEstimate:
    def test_bitwise_reproducible(self):
        a = mc_estimate(BIN_MODEL, BIN_BELIEF, 2.0, "cmle", 4000, 42)
        b = mc_estimate(BIN_MODEL, BIN_BELIEF, 2.0, "cmle", 4000, 42)
        assert a == b
        assert isinstance(a, McEstimate)

    def test_binary_dc_against_closed_form(self):
        est = mc_estimate(BIN_MODEL, BIN_BELIEF, 2.0, "cmle", 20_000, 7)
        closed = ct.binary_dc_cmle_closed(0.5, 0.2, 2.0)
        assert abs(est.value - closed) <= 3.0 * est.std_error

    def test_noncausal_against_closed_form(self):
        est = mc_estimate(BIN_MODEL, BIN_BELIEF, 2.0, "mle", 20_000, 8)
        closed = ct.binary_dc_g(0.5, 0.2, 2.0)
        assert abs(est.value - closed) <= 3.0 * est.std_error

    def test_matched_filter_recovers_information_rate(self):
        prior = DiscretePrior.uniform([1.0, 2.0])
        model = PiecewiseSignalModel([0.0, 1.0], JointPrior([((1.0,), 0.5), ((2.0,), 0.5)]))
        est = mc_estimate(model, model.prior, 1.0, "cmle", 20_000, 9)
        assert abs(est.value - mutual_information(prior, 1.0)) <= 3.0 * est.std_error

    def test_matched_filter_not_worse_than_mismatched(self):
        matched = mc_estimate(BIN_MODEL, BIN_TRUTH, 2.0, "cmle", 20_000, 10)
        mismatched = mc_estimate(BIN_MODEL, BIN_BELIEF, 2.0, "cmle", 20_000, 10)
        joint = 3.0 * math.hypot(matched.std_error, mismatched.std_error)
        assert matched.value <= mismatched.value + joint

    def test_infinite_loss_is_tallied_not_raised(self):
        # belief is certain the first interval is dead while the truth is not
        truth = JointPrior.delta([1.0, 1.0])
        belief = JointPrior([((0.0, 1.0), 0.5), ((0.0, 2.0), 0.5)])
        model = PiecewiseSignalModel([0.0, 1.0, 2.0], truth)
        est = mc_estimate(model, belief, 0.5, "cmle", 10, 3)
        assert est.value == math.inf
        assert est.infinite_replicates == 10

    def test_validation(self):
        with pytest.raises(ValueError):
            mc_estimate(BIN_MODEL, BIN_BELIEF, 2.0, "cmle", 0, 1)
        with pytest.raises(ValueError):
            mc_estimate(BIN_MODEL, BIN_BELIEF, 2.0, "smoothed", 10, 1)
        with pytest.raises(ValueError):
            mc_estimate(BIN_MODEL, JointPrior.delta([1.0, 2.0]), 2.0, "cmle", 10, 1)


class TestCoarsen:
    def test_identity_factor(self):
        model = PiecewiseSignalModel([0.0, 0.5, 1.0], JointPrior.delta([1.0, 3.0]))
        assert coarsen(model, 1) is model

    def test_constant_atom_unchanged(self):
        model = PiecewiseSignalModel([0.0, 0.5, 1.0], JointPrior.delta([2.0, 2.0]))
        merged = coarsen(model, 2)
        assert merged.breakpoints.tolist() == [0.0, 1.0]
        assert merged.prior.vectors.tolist() == [[2.0]]

    def test_duration_weighted_average(self):
        model = PiecewiseSignalModel([0.0, 0.5, 1.0], JointPrior.delta([1.0, 3.0]))
        merged = coarsen(model, 2)
        assert merged.prior.vectors.tolist() == [[2.0]]

    def test_uneven_durations(self):
        model = PiecewiseSignalModel([0.0, 0.75, 1.0], JointPrior.delta([1.0, 3.0]))
        merged = coarsen(model, 2)
        assert merged.prior.vectors[0, 0] == pytest.approx(0.75 * 1.0 + 0.25 * 3.0)

    def test_colliding_atoms_pooled(self):
        prior = JointPrior([((1.0, 3.0), 0.5), ((3.0, 1.0), 0.5)])
        model = PiecewiseSignalModel([0.0, 0.5, 1.0], prior)
        merged = coarsen(model, 2)
        assert merged.prior.n_atoms == 1
        assert merged.prior.vectors.tolist() == [[2.0]]
        assert merged.prior.ws.tolist() == [1.0]

    def test_non_divisible_factor_rejected(self):
        model = PiecewiseSignalModel([0.0, 0.5, 1.0], JointPrior.delta([1.0, 3.0]))
        with pytest.raises(ValueError):
            coarsen(model, 3)
