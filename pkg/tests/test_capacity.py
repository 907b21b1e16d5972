"""Block capacities, the chord-gap optimizer and its oracles."""

import numpy as np
import pytest

from corrchan import (ChannelMap, ContractError, DensityOperator, NoiseModel,
                      StateEnsemble, WernerEnsemble, brute_force_chi2,
                      capacity_breakdown, capacity_curve, chi0, chi1,
                      chi2_bound, chi2_closed_form, combine_subspace_capacities,
                      crange, f_of_c, holevo_of_werner_ensemble, holevo_quantity,
                      ket, optimal_input_ensemble, random_density,
                      truncate_to_blocks, von_neumann_entropy, werner_parameter,
                      werner_state)

LOG2_3 = np.log2(3.0)
LOG2_5 = np.log2(5.0)
LOG2_5_4 = np.log2(5.0 / 4.0)
ETA_GRID = np.round(np.linspace(0.0, 1.0, 11), 10)


class TestF:
    def test_spot_values(self):
        assert f_of_c(0.0) == pytest.approx(2.0, abs=1e-12)
        assert f_of_c(-1.0) == pytest.approx(0.0, abs=1e-12)
        assert f_of_c(1.0 / 3.0) == pytest.approx(LOG2_3, abs=1e-12)

    def test_matches_werner_entropy_on_grid(self):
        for c in np.linspace(-1.0, 1.0 / 3.0, 100):
            assert f_of_c(float(c)) == pytest.approx(
                von_neumann_entropy(werner_state(float(c))), abs=1e-12)

    def test_out_of_range(self):
        with pytest.raises(ContractError):
            f_of_c(0.5)
        with pytest.raises(ContractError):
            f_of_c(-1.1)

    def test_strictly_concave(self):
        grid = np.linspace(-1.0 + 1e-6, 1.0 / 3.0 - 1e-6, 200)
        vals = f_of_c(grid)
        second = vals[2:] - 2 * vals[1:-1] + vals[:-2]
        assert second.max() < 0.0


class TestChi2Bound:
    def test_entangled_unit_eta(self):
        bound = chi2_bound(crange("entangled"), 1.0)
        assert bound.chi2 == pytest.approx(1.0, abs=1e-12)
        assert bound.gamma_opt == pytest.approx(-1.0 / 3.0, abs=1e-12)
        assert bound.output_probs[0] == pytest.approx(0.5, abs=1e-12)
        assert bound.output_probs[1] == pytest.approx(0.5, abs=1e-12)

    def test_separable_unit_eta(self):
        # frozen from the Blahut-Arimoto oracle (and equal to log2(5/4))
        bound = chi2_bound(crange("separable"), 1.0)
        assert bound.chi2 == pytest.approx(LOG2_5_4, abs=1e-9)
        assert bound.gamma_opt == pytest.approx(1.0 / 15.0, abs=1e-12)
        assert bound.output_probs[0] == pytest.approx(0.4, abs=1e-12)

    def test_degenerate_interval(self):
        for mode in ("entangled", "separable"):
            bound = chi2_bound(crange(mode), 0.0)
            assert bound == (0.0, 0.0, 0.0, (0.5, 0.5))

    def test_closed_form_agrees(self):
        for mode in ("entangled", "separable"):
            for eta in ETA_GRID:
                bound = chi2_bound(crange(mode), float(eta))
                assert chi2_closed_form(crange(mode), float(eta)) == pytest.approx(
                    bound.chi2, abs=1e-12)

    def test_off_by_two_variant_rejected(self):
        """The closed form with a spurious trailing -2 gives -1 where the
        capacity is 1; nonnegativity of the Holevo quantity rules it out."""
        legacy = chi2_closed_form(crange("entangled"), 1.0) - 2.0
        assert legacy == pytest.approx(-1.0, abs=1e-12)
        assert legacy < 0.0  # violates chi >= 0

    def test_stationarity_of_gamma_opt(self):
        h = 1e-6
        for mode in ("entangled", "separable"):
            for eta in (0.3, 0.6, 0.9, 1.0):
                bound = chi2_bound(crange(mode), eta)
                slope = (f_of_c(bound.gamma_opt + h) - f_of_c(bound.gamma_opt - h)) / (2 * h)
                assert slope == pytest.approx(bound.mu, abs=1e-9)

    def test_nondecreasing_in_eta(self):
        for mode in ("entangled", "separable"):
            vals = [chi2_bound(crange(mode), float(e)).chi2 for e in ETA_GRID]
            assert np.diff(vals).min() >= -1e-10

    def test_entangled_dominates_separable(self):
        for eta in ETA_GRID:
            ent = chi2_bound(crange("entangled"), float(eta)).chi2
            sep = chi2_bound(crange("separable"), float(eta)).chi2
            assert ent >= sep - 1e-10


class TestSmallBlocks:
    def test_chi0_and_chi1(self):
        assert chi0() == 0.0
        assert chi1() == 1.0

    def test_one_photon_entropy_sandwich(self):
        # outputs of the channel on one-photon inputs carry 1..2 bits
        rng = np.random.default_rng(40)
        channel = ChannelMap(NoiseModel(1.0, 0.7))
        for _ in range(20):
            block = random_density(rng, 4, "one_photon")
            embedded = np.zeros((9, 9), dtype=complex)
            embedded[1:5, 1:5] = block.matrix
            out = channel(DensityOperator(embedded))
            s = von_neumann_entropy(out)
            assert 1.0 - 1e-10 <= s <= 2.0 + 1e-10

    def test_slot_alphabet_saturates_chi1(self):
        channel = ChannelMap(NoiseModel(0.5, 0.5))
        ens = StateEnsemble(((0.5, DensityOperator.pure(ket("V0"))),
                             (0.5, DensityOperator.pure(ket("0V")))))
        assert holevo_quantity(ens, channel) == pytest.approx(1.0, abs=1e-12)


class TestCombiner:
    def test_three_block_maximum(self):
        total, probs = combine_subspace_capacities((0.0, 1.0, 1.0))
        assert total == pytest.approx(LOG2_5, abs=1e-12)
        assert probs == pytest.approx((0.2, 0.4, 0.4), abs=1e-12)

    def test_baseline_combination(self):
        total, probs = combine_subspace_capacities((0.0, 1.0, 0.0))
        assert total == pytest.approx(2.0, abs=1e-12)
        assert probs == pytest.approx((0.25, 0.5, 0.25), abs=1e-12)

    def test_single_block(self):
        total, probs = combine_subspace_capacities((0.0,))
        assert total == 0.0
        assert probs == (1.0,)

    def test_zero_capacity_block_still_helps(self):
        # a zero-capacity block enlarges the alphabet and the total
        with_vacuum, _ = combine_subspace_capacities((0.0, 1.0, 1.0))
        without, _ = combine_subspace_capacities((1.0, 1.0))
        assert with_vacuum > without

    def test_negative_rejected(self):
        with pytest.raises(ContractError):
            combine_subspace_capacities((0.0, -0.5))

    def test_matches_numeric_simplex_maximization(self):
        """Oracle: coordinate-wise golden-section ascent of
        sum p_k chi_k + H(p) over the probability simplex."""
        from corrchan.measurement import golden_section_max
        from corrchan.qstate import _xlog2x

        def objective(chis, x, y):
            p = np.array([x, (1 - x) * y, (1 - x) * (1 - y)])
            return float(p @ chis - _xlog2x(p).sum())

        for chis in ([0.0, 1.0, 1.0], [0.0, 1.0, 0.32192809488736235], [0.3, 0.9, 0.1]):
            arr = np.array(chis)
            x, y = 1 / 3, 1 / 2
            for _ in range(60):
                x, _ = golden_section_max(lambda t: objective(arr, t, y), 0.0, 1.0, 1e-13)
                y, _ = golden_section_max(lambda t: objective(arr, x, t), 0.0, 1.0, 1e-13)
            numeric = objective(arr, x, y)
            total, _ = combine_subspace_capacities(chis)
            assert total == pytest.approx(numeric, abs=1e-8)


class TestWernerEnsembleHolevo:
    def test_single_member_is_zero(self):
        assert holevo_of_werner_ensemble(WernerEnsemble(((1.0, -0.4),)), 1.0) == 0.0

    def test_endpoint_pair(self):
        ens = WernerEnsemble(((0.5, -1.0), (0.5, 1.0 / 3.0)))
        assert holevo_of_werner_ensemble(ens, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_maximally_mixed_member(self):
        assert holevo_of_werner_ensemble(WernerEnsemble(((1.0, 0.0),)), 0.7) == 0.0

    def test_bound_dominates_random_ensembles(self):
        rng = np.random.default_rng(41)
        for mode in ("entangled", "separable"):
            c_range = crange(mode)
            bound = chi2_bound(c_range, 0.8).chi2
            for _ in range(500):
                k = rng.integers(2, 6)
                probs = rng.dirichlet(np.ones(k))
                cs = rng.uniform(c_range.c_min, c_range.c_max, k)
                ens = WernerEnsemble(tuple(zip(probs, cs)))
                assert holevo_of_werner_ensemble(ens, 0.8) <= bound + 1e-10


class TestBruteForce:
    def test_matches_closed_form_at_unit_eta(self):
        assert brute_force_chi2(crange("entangled"), 1.0, 41) == pytest.approx(1.0, abs=1e-6)
        assert brute_force_chi2(crange("separable"), 1.0, 41) == pytest.approx(
            LOG2_5_4, abs=1e-6)

    def test_degenerate_eta(self):
        assert brute_force_chi2(crange("entangled"), 0.0, 41) == pytest.approx(0.0, abs=1e-10)

    def test_grid_too_small(self):
        with pytest.raises(ContractError):
            brute_force_chi2(crange("entangled"), 1.0, 5)

    def test_agreement_on_sample_etas(self):
        for mode in ("entangled", "separable"):
            for eta in (0.2, 0.7):
                closed = chi2_bound(crange(mode), eta).chi2
                assert brute_force_chi2(crange(mode), eta, 41) == pytest.approx(
                    closed, abs=1e-6)


class TestOptimalEnsemble:
    def test_probabilities_sum_to_one(self):
        for mode in ("entangled", "separable"):
            ens, _ = optimal_input_ensemble(mode, 0.6)
            assert sum(p for p, _ in ens.items) == pytest.approx(1.0, abs=1e-12)

    def test_entangled_pair_weights_at_unit_eta(self):
        ens, breakdown = optimal_input_ensemble("entangled", 1.0)
        assert breakdown.block_probs == pytest.approx((0.2, 0.4, 0.4), abs=1e-12)
        pair_probs = [p for p, _ in ens.items[3:]]
        assert pair_probs == pytest.approx([0.2, 0.2], abs=1e-12)

    def test_separable_pair_parameters(self):
        ens, _ = optimal_input_ensemble("separable", 1.0)
        cs = [werner_parameter(truncate_to_blocks(rho).blocks[2])
              for _, rho in ens.items[3:]]
        assert cs == pytest.approx([-1.0 / 3.0, 1.0 / 3.0], abs=1e-12)

    def test_breakdown_consistency(self):
        b = capacity_breakdown("entangled", 0.5)
        assert b.total == pytest.approx(
            np.log2(2.0 ** b.chi0 + 2.0 ** b.chi1 + 2.0 ** b.chi2), abs=1e-12)
        assert sum(b.block_probs) == pytest.approx(1.0, abs=1e-12)


class TestCurve:
    def test_endpoints(self):
        assert capacity_curve("entangled", [1.0])[0][1] == pytest.approx(LOG2_5, abs=1e-9)
        assert capacity_curve("separable", [1.0])[0][1] == pytest.approx(
            np.log2(17.0 / 4.0), abs=1e-9)
        assert capacity_curve("baseline", [1.0])[0][1] == 2.0

    def test_zero_eta_all_modes(self):
        for mode in ("entangled", "separable", "baseline"):
            assert capacity_curve(mode, [0.0])[0][1] == pytest.approx(2.0, abs=1e-12)

    def test_ordering_and_monotonicity(self):
        grid = np.linspace(0.0, 1.0, 101)
        ent = np.array([t for _, t in capacity_curve("entangled", grid)])
        sep = np.array([t for _, t in capacity_curve("separable", grid)])
        base = np.array([t for _, t in capacity_curve("baseline", grid)])
        assert np.diff(ent).min() >= -1e-10
        assert np.diff(sep).min() >= -1e-10
        assert (ent - sep).min() >= -1e-10
        assert (sep - base).min() >= -1e-10

    def test_unknown_mode(self):
        with pytest.raises(ContractError):
            capacity_curve("bogus", [0.5])
