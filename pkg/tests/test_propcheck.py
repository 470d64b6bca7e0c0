"""Tests for the randomized property-check suites and their report types."""

import math

import numpy as np
import pytest

import oracles
from qexp import propcheck as pp
from qexp import exponents as qe
from qexp import information as qi
from qexp.divergence import INF
from qexp.divergence import DivergenceKind as K


def small_channel(seed=11, dim=2, k=2):
    return qi.random_channel(dim, k, seed)


def small_source(seed=31):
    rng = np.random.default_rng(seed)
    return qe.CqSource(prior=rng.dirichlet(np.ones(2)),
                       side_info=qi.random_channel(2, 2, seed + 1))


class TestCheckReport:
    def test_passed_must_match_violation_comparison(self):
        pp.CheckReport(suite="x", instances=1, max_violation=0.5,
                       tolerance=1.0, passed=True)
        with pytest.raises(ValueError):
            pp.CheckReport(suite="x", instances=1, max_violation=2.0,
                           tolerance=1.0, passed=True)
        with pytest.raises(ValueError):
            pp.CheckReport(suite="x", instances=1, max_violation=0.5,
                           tolerance=1.0, passed=False)

    def test_nan_violation_cannot_pass(self):
        with pytest.raises(ValueError):
            pp.CheckReport(suite="x", instances=1,
                           max_violation=math.nan, tolerance=1.0,
                           passed=True)
        report = pp.CheckReport(suite="x", instances=1,
                                max_violation=math.nan, tolerance=1.0,
                                passed=False)
        assert not report.passed

    def test_infinite_tolerance_always_passes(self):
        report = pp.CheckReport(suite="x", instances=1, max_violation=5.0,
                                tolerance=INF, passed=True)
        assert report.passed

    def test_counts_must_be_nonnegative(self):
        with pytest.raises(ValueError):
            pp.CheckReport(suite="x", instances=-1, max_violation=0.0,
                           tolerance=1.0, passed=True)
        with pytest.raises(ValueError):
            pp.CheckReport(suite="x", instances=1, max_violation=0.0,
                           tolerance=1.0, passed=True, skipped=-2)


class TestEquicontinuityBound:
    def test_invalid_arguments_rejected(self):
        with pytest.raises(ValueError):
            pp.EquicontinuityBound(delta=-0.1, eta=1.0, capacity_eta=0.5,
                                   bound=0.1)
        with pytest.raises(ValueError):
            pp.EquicontinuityBound(delta=1.2, eta=1.0, capacity_eta=0.5,
                                   bound=0.1)
        with pytest.raises(ValueError):
            pp.EquicontinuityBound(delta=0.5, eta=-1.0, capacity_eta=0.5,
                                   bound=0.1)
        with pytest.raises(ValueError):
            pp.EquicontinuityBound(delta=0.5, eta=1.0, capacity_eta=-0.5,
                                   bound=0.1)
        with pytest.raises(ValueError):
            pp.EquicontinuityBound(delta=0.5, eta=1.0, capacity_eta=0.5,
                                   bound=-0.1)

    def test_zero_distance_forces_zero_bound(self):
        with pytest.raises(ValueError):
            pp.EquicontinuityBound(delta=0.0, eta=1.0, capacity_eta=0.5,
                                   bound=0.1)
        assert pp.renyi_prior_bound(0.0, 1.0, 0.5).bound == 0.0
        assert pp.augustin_prior_bound(0.0, 1.0, 0.5).bound == 0.0

    def test_full_distance_gives_twice_capacity(self):
        for eta in (0.5, 1.0, 2.0):
            for c in (0.3, 0.8):
                got = pp.renyi_prior_bound(1.0, eta, c).bound
                assert got == pytest.approx(2.0 * c, abs=1e-12)

    def test_order_one_value_by_hand(self):
        delta, c = 0.3, 0.8
        h = -delta * math.log(delta) - (1 - delta) * math.log(1 - delta)
        expect = (delta * c + h) + math.log((1 - delta)
                                           + delta * math.exp(c))
        got = pp.renyi_prior_bound(delta, 1.0, c).bound
        assert got == pytest.approx(expect, abs=1e-12)

    def test_half_order_value_by_hand(self):
        delta, c = 0.25, 0.6
        head = -math.log((1 - delta) ** 2
                         + delta ** 2 * math.exp(-c))
        tail = math.log((1 - delta) + delta * math.exp(c))
        got = pp.renyi_prior_bound(delta, 0.5, c).bound
        assert got == pytest.approx(head + tail, abs=1e-12)

    def test_order_zero_head_uses_min_branch(self):
        delta, c = 0.2, 0.4
        head = min(-math.log(1 - delta), c - math.log(delta))
        tail = math.log((1 - delta) + delta * math.exp(c))
        got = pp.renyi_prior_bound(delta, 0.0, c).bound
        assert got == pytest.approx(head + tail, abs=1e-12)

    def test_augustin_bound_by_hand(self):
        delta, c = 0.15, 1.1
        h = -delta * math.log(delta) - (1 - delta) * math.log(1 - delta)
        got = pp.augustin_prior_bound(delta, 0.7, c).bound
        assert got == pytest.approx(h + delta * c, abs=1e-12)

    def test_bounds_nonnegative_and_monotone_in_distance(self):
        deltas = np.linspace(0.0, 1.0, 21)
        for eta in (0.0, 0.3, 1.0, 2.5):
            vals = [pp.renyi_prior_bound(d, eta, 0.5).bound
                    for d in deltas]
            assert all(v >= 0.0 for v in vals)
        vals = [pp.augustin_prior_bound(d, 1.0, 0.5).bound
                for d in deltas]
        assert all(v >= 0.0 for v in vals)


class TestClassicalReference:
    def test_divergence_matches_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            p = rng.dirichlet(np.ones(4))
            q = rng.dirichlet(np.ones(4))
            for alpha in (0.0, 0.5, 1.0, 2.0, INF):
                got = pp._classical_divergence(p, q, alpha)
                ref = oracles.renyi_divergence(p, q, alpha)
                assert got == pytest.approx(ref, abs=1e-12)

    def test_divergence_support_rules(self):
        p = np.array([1.0, 0.0])
        q = np.array([0.5, 0.5])
        assert pp._classical_divergence(p, q, 0.0) == pytest.approx(
            math.log(2.0))
        assert math.isinf(pp._classical_divergence(q, p, 2.0))

    def test_first_type_matches_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            rows = rng.dirichlet(np.ones(3), size=3)
            prior = rng.dirichlet(np.ones(3))
            for alpha in (0.3, 1.0, 1.7):
                got = pp._classical_sibson(prior, rows, alpha)
                ref = oracles.sibson_information(prior, rows, alpha)
                assert got == pytest.approx(ref, abs=1e-11)

    def test_second_type_matches_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(6):
            rows = rng.dirichlet(np.ones(3), size=2)
            prior = rng.dirichlet(np.ones(2))
            for alpha in (0.4, 1.6):
                got = pp._classical_augustin(prior, rows, alpha)
                ref = oracles.augustin_information(prior, rows, alpha)
                assert got == pytest.approx(ref, abs=1e-9)

    def test_first_type_auxiliary_equals_gallager_form(self):
        rng = np.random.default_rng(9)
        rows = rng.dirichlet(np.ones(3), size=2)
        prior = rng.dirichlet(np.ones(2))
        for s in (-0.4, 0.5, 2.0):
            got = pp._classical_e0(1, s, prior, rows)
            ref = oracles.gallager_e0(prior, rows, s)
            assert got == pytest.approx(ref, abs=1e-12)

    def test_exponent_matches_oracle(self):
        rng = np.random.default_rng(11)
        rows = rng.dirichlet(np.ones(3), size=2)
        prior = rng.dirichlet(np.ones(2))
        mutual = pp._classical_mutual(prior, rows)
        for rate in (0.5 * mutual, 1.2 * mutual):
            got = pp._classical_exponent(rate, prior, rows)
            ref = oracles.channel_exponent_fixed_prior(rate, prior, rows)
            assert got == pytest.approx(ref, abs=1e-9)


class TestSimplexGrid:
    def test_binary_grid_counts_and_normalization(self):
        grid = pp._simplex_grid(2, 0.01)
        assert len(grid) == 101
        assert all(abs(p.sum() - 1.0) < 1e-12 for p in grid)
        assert all((p >= 0.0).all() for p in grid)

    def test_ternary_grid(self):
        grid = pp._simplex_grid(3, 0.5)
        assert len(grid) == 6
        assert all(abs(p.sum() - 1.0) < 1e-12 for p in grid)


class TestDivergenceLaws:
    def test_passes_and_skips_out_of_range_orders(self):
        report = pp.check_divergence_laws(trials=30, seed=2)
        assert report.passed
        assert report.instances == 30
        assert report.skipped > 0
        assert report.suite == "divergence_laws"

    def test_deterministic(self):
        a = pp.check_divergence_laws(trials=10, seed=4)
        b = pp.check_divergence_laws(trials=10, seed=4)
        assert a == b


class TestClassicalReduction:
    def test_diagonal_instances_match_scalar_paths(self):
        report = pp.check_classical_reduction(trials=5, seed=8)
        assert report.passed
        assert report.max_violation <= 1e-8


class TestPriorShape:
    def test_convexity_and_concavity_midpoints(self):
        report = pp.check_prior_shape(small_channel(13, 2, 3), trials=8,
                                      seed=1)
        assert report.passed
        assert report.instances == 8


class TestConcavityInS:
    def test_default_bands_concave(self):
        report = pp.check_concavity_in_s(small_channel(17))
        assert report.passed
        assert report.instances == 6

    def test_custom_band(self):
        band = tuple(np.arange(0.1, 0.5, 0.05))
        report = pp.check_concavity_in_s(small_channel(17), grid=(band,),
                                         kinds=(K.PETZ,), i_set=(1,))
        assert report.passed
        assert report.instances == 1


class TestEquicontinuity:
    def test_first_type_changes_within_bound(self):
        report = pp.check_equicontinuity_renyi(small_channel(19),
                                               trials=20, seed=3)
        assert report.passed
        assert report.tolerance == 1e-7

    def test_second_type_changes_within_bound(self):
        report = pp.check_equicontinuity_augustin(small_channel(19),
                                                  trials=20, seed=3)
        assert report.passed

    def test_order_cap_zero_records_only(self):
        report = pp.check_equicontinuity_renyi(small_channel(19), eta=0.0,
                                               trials=5, seed=3)
        assert report.passed
        assert math.isinf(report.tolerance)

    def test_invalid_order_caps_rejected(self):
        with pytest.raises(ValueError):
            pp.check_equicontinuity_renyi(small_channel(19), eta=-1.0)
        with pytest.raises(ValueError):
            pp.check_equicontinuity_augustin(small_channel(19), eta=0.0)


class TestInterpolation:
    def test_pinched_norms_interpolate(self):
        report = pp.check_interpolation_petz(trials=20, seed=5)
        assert report.passed
        assert report.max_violation <= 1e-9

    def test_product_infima_log_convex(self):
        report = pp.check_interpolation_product(trials=3, seed=5)
        assert report.passed

    def test_product_rejects_unsupported_shapes(self):
        with pytest.raises(ValueError):
            pp.check_interpolation_product(dim=3)
        with pytest.raises(ValueError):
            pp.check_interpolation_product(n=5)
        with pytest.raises(ValueError):
            pp.check_interpolation_product(kind="other")


class TestMinimax:
    def test_four_orderings_agree_above_capacity(self):
        report = pp.check_minimax(small_channel(23))
        assert report.passed
        assert report.max_violation <= 1e-3

    def test_rejects_rate_at_or_below_capacity(self):
        with pytest.raises(ValueError):
            pp.check_minimax(small_channel(23), rate_factor=1.0)


class TestEntropicDuality:
    def test_iid_exponent_matches_type_decomposition(self):
        source = small_source(29)
        h1 = qe.conditional_renyi_entropy(K.PETZ, source, 1.0)
        report = pp.check_entropic_duality(source, rates=(0.75 * h1,))
        assert report.passed
        assert report.instances == 1


class TestFenchelDuality:
    def test_combined_budget_matches_negative_s_supremum(self):
        report = pp.check_fenchel_duality(small_source(37),
                                          small_channel(41))
        assert report.passed
        assert report.max_violation <= 2e-3


class TestDerivativeIdentities:
    def test_slope_and_curvature_at_zero(self):
        report = pp.check_derivative_identities(trials=4, seed=6)
        assert report.passed


class TestRunAll:
    def test_config_validation(self):
        with pytest.raises(ValueError):
            pp.CheckConfig(law_trials=0)
        with pytest.raises(ValueError):
            pp.run_all(pp.CheckConfig(suites=("no_such_suite",)))

    def test_subset_runs_in_standard_order_and_is_deterministic(self):
        config = pp.CheckConfig(
            law_trials=10, interpolation_trials=10,
            suites=("interpolation_petz", "divergence_laws"))
        first = pp.run_all(config)
        second = pp.run_all(config)
        assert [r.suite for r in first] == ["divergence_laws",
                                            "interpolation_petz"]
        assert first == second
        assert all(r.passed for r in first)

    def test_merged_reports_accumulate_instances(self):
        config = pp.CheckConfig(prior_shape_trials=4,
                                prior_shape_channels=2,
                                suites=("prior_shape",))
        (report,) = pp.run_all(config)
        assert report.passed
        assert report.instances == 4
