import math

import numpy as np
import pytest

from pevsim.gates import OracleFunction
from pevsim.noise import (
    ErrorModel,
    GateSemantics,
    NoiseParams,
    final_amplitudes_unitary,
    mc_run,
    phase_error_experiment,
    prob_correct,
    prob_incorrect,
    simulate_noisy,
    state_tau2,
    sweep,
)
from pevsim.pev import NullBranchError
from pevsim.rng import make_stream

F1 = OracleFunction.from_name("f1")
F2 = OracleFunction.from_name("f2")


def random_params(gen, noiseless_h2=True):
    a2 = float(gen.random())
    m2 = float(gen.random())
    kwargs = {}
    if not noiseless_h2:
        g2 = float(gen.random())
        kwargs = {"gamma": math.sqrt(g2), "delta": math.sqrt(1 - g2)}
    return NoiseParams(
        alpha=math.sqrt(a2),
        beta=math.sqrt(1 - a2),
        mu=math.sqrt(m2),
        kappa=math.sqrt(1 - m2),
        **kwargs,
    )


class TestNoiseParams:
    def test_pairs_must_normalise(self):
        with pytest.raises(ValueError):
            NoiseParams(alpha=1.0, beta=1.0, mu=1.0, kappa=0.0)

    def test_amplitudes_must_be_in_range(self):
        with pytest.raises(ValueError):
            NoiseParams(alpha=1.2, beta=0.0, mu=1.0, kappa=0.0)

    def test_identical_gates(self):
        p = NoiseParams.identical_gates(0.9)
        assert p.alpha == pytest.approx(math.sqrt(0.9))
        assert p.alpha == p.mu and p.beta == p.kappa
        assert p.gamma == 1.0 and p.delta == 0.0


class TestStateTau2:
    def test_noiseless_matches_ideal_register(self):
        got = state_tau2(NoiseParams.noiseless())
        assert np.allclose(got, 0.5 * np.array([1, -1, 1, -1]), atol=1e-12)

    def test_first_gate_always_flipping(self):
        params = NoiseParams(alpha=0.0, beta=1.0, mu=1.0, kappa=0.0)
        assert np.allclose(state_tau2(params), 0.5 * np.array([1, -1, -1, 1]), atol=1e-12)

    def test_unit_norm_for_random_parameters(self):
        gen = make_stream(21)
        for _ in range(100):
            params = random_params(gen, noiseless_h2=False)
            assert np.linalg.norm(state_tau2(params)) == pytest.approx(1.0, abs=1e-12)


class TestFinalAmplitudes:
    def test_noiseless(self):
        assert final_amplitudes_unitary(NoiseParams.noiseless()) == (1.0, 0.0)

    def test_both_gates_at_ninety_percent(self):
        c0, c1 = final_amplitudes_unitary(NoiseParams.identical_gates(0.9))
        assert c0 * c0 == pytest.approx(36.0 / 37.0, abs=1e-12)
        assert c1 * c1 == pytest.approx(1.0 / 37.0, abs=1e-12)

    def test_half_half_kills_error_branch(self):
        c0, c1 = final_amplitudes_unitary(NoiseParams.identical_gates(0.5))
        assert c0 == pytest.approx(1.0, abs=1e-12)
        assert c1 == 0.0

    def test_normalised(self):
        gen = make_stream(22)
        for _ in range(200):
            c0, c1 = final_amplitudes_unitary(random_params(gen))
            assert c0 * c0 + c1 * c1 == pytest.approx(1.0, abs=1e-12)

    def test_null_branch_at_degenerate_corner(self):
        half = math.sqrt(0.5)
        with pytest.raises(NullBranchError):
            final_amplitudes_unitary(NoiseParams(alpha=0.0, beta=1.0, mu=half, kappa=half))

    def test_normaliser_matches_displayed_form(self):
        # 1 + 2 mu kappa (alpha^2 - beta^2) is the textbook normaliser; the
        # implementation uses the cancellation-free sum of squares.
        gen = make_stream(23)
        for _ in range(100):
            p = random_params(gen)
            displayed = 1.0 + 2.0 * p.mu * p.kappa * (p.alpha**2 - p.beta**2)
            stable = (p.alpha * (p.mu + p.kappa)) ** 2 + (p.beta * (p.mu - p.kappa)) ** 2
            assert stable == pytest.approx(displayed, abs=1e-12)


class TestClosedForms:
    def test_reference_values(self):
        assert prob_correct(0.9) == pytest.approx(36.0 / 37.0, abs=1e-12)
        assert prob_incorrect(0.9) == pytest.approx(1.0 / 37.0, abs=1e-12)
        assert prob_correct(0.5) == pytest.approx(1.0, abs=1e-12)
        assert prob_correct(1.0) == 1.0
        assert prob_incorrect(1.0) == 0.0

    def test_matches_displayed_formulas(self):
        for a2 in np.linspace(0.0, 1.0, 101):
            a = math.sqrt(a2)
            b = math.sqrt(1.0 - a2)
            d = 1.0 + 2.0 * a * b * (2.0 * a2 - 1.0)
            assert prob_correct(a2) == pytest.approx(a2 * (a + b) ** 2 / d, abs=1e-12)
            assert prob_incorrect(a2) == pytest.approx((a2 - 1.0) * (2.0 * a * b - 1.0) / d, abs=1e-12)

    def test_complementarity(self):
        for a2 in np.linspace(0.0, 1.0, 201):
            assert prob_correct(a2) + prob_incorrect(a2) == pytest.approx(1.0, abs=1e-12)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            prob_correct(1.5)
        with pytest.raises(ValueError):
            prob_incorrect(-0.1)


class TestCurveProperties:
    GRID = np.linspace(0.0, 1.0, 1001)

    def test_error_beats_single_gate_error(self):
        for a2 in self.GRID:
            p1 = prob_incorrect(a2)
            assert p1 <= (1.0 - a2) + 1e-15
            if 0.0 < a2 < 1.0:
                assert p1 < (1.0 - a2)

    def test_local_maximum_at_half(self):
        assert prob_correct(0.5) == pytest.approx(1.0, abs=1e-12)
        for h in np.arange(0.001, 0.0501, 0.001):
            assert prob_correct(0.5) >= prob_correct(0.5 + h)
            assert prob_correct(0.5) >= prob_correct(0.5 - h)

    def test_ratio_bounded_and_tends_to_one(self):
        for a2 in self.GRID[1:-1]:
            ratio = prob_incorrect(a2) / (1.0 - a2)
            assert -1e-15 <= ratio <= 1.0 + 1e-12
        assert prob_incorrect(1e-4) / (1.0 - 1e-4) >= 0.99


class TestSimulateNoisy:
    def test_noiseless_is_exact_for_both_semantics(self):
        for semantics in GateSemantics:
            dist = simulate_noisy(F1, NoiseParams.noiseless(), semantics, ErrorModel.coherent())
            assert dist[0] == pytest.approx(1.0, abs=1e-12)
            assert dist[1] == pytest.approx(0.0, abs=1e-12)

    def test_noiseless_balanced_oracle(self):
        for semantics in GateSemantics:
            dist = simulate_noisy(F2, NoiseParams.noiseless(), semantics, ErrorModel.coherent())
            assert dist[1] == pytest.approx(1.0, abs=1e-12)

    def test_unitary_matches_closed_forms(self):
        dist = simulate_noisy(
            F1, NoiseParams.identical_gates(0.9), GateSemantics.UNITARY, ErrorModel.coherent()
        )
        assert dist[0] == pytest.approx(36.0 / 37.0, abs=1e-12)
        assert dist[1] == pytest.approx(1.0 / 37.0, abs=1e-12)

    def test_projection_branch_enumeration(self):
        # Independent oracle: exhaustive 2x2 branch bookkeeping by hand
        # gives P(0) = alpha^2 mu^2 + beta^2 kappa^2.
        gen = make_stream(31)
        for _ in range(50):
            p = random_params(gen)
            dist = simulate_noisy(F1, p, GateSemantics.PROJECTION, ErrorModel.coherent())
            expected = p.alpha**2 * p.mu**2 + p.beta**2 * p.kappa**2
            assert dist[0] == pytest.approx(expected, abs=1e-12)

    def test_projection_value_at_ninety_percent(self):
        dist = simulate_noisy(
            F1, NoiseParams.identical_gates(0.9), GateSemantics.PROJECTION, ErrorModel.coherent()
        )
        assert dist[0] == pytest.approx(0.82, abs=1e-12)
        assert dist[1] == pytest.approx(0.18, abs=1e-12)

    def test_semantics_gap_for_coherent_errors(self):
        params = NoiseParams.identical_gates(0.9)
        unitary = simulate_noisy(F1, params, GateSemantics.UNITARY, ErrorModel.coherent())
        projection = simulate_noisy(F1, params, GateSemantics.PROJECTION, ErrorModel.coherent())
        assert unitary[0] - projection[0] > 0.15

    def test_closed_form_agreement_for_random_parameters(self):
        gen = make_stream(32)
        for _ in range(50):
            p = random_params(gen)
            dist = simulate_noisy(F1, p, GateSemantics.UNITARY, ErrorModel.coherent())
            c0, c1 = final_amplitudes_unitary(p)
            assert dist[0] == pytest.approx(c0 * c0, abs=1e-10)
            assert dist[1] == pytest.approx(c1 * c1, abs=1e-10)

    def test_incoherent_semantics_agree(self):
        for a2 in (0.1, 0.3, 0.5, 0.7, 0.9):
            for m2 in (0.1, 0.3, 0.5, 0.7, 0.9):
                p = NoiseParams(
                    alpha=math.sqrt(a2), beta=math.sqrt(1 - a2),
                    mu=math.sqrt(m2), kappa=math.sqrt(1 - m2),
                )
                u = simulate_noisy(F1, p, GateSemantics.UNITARY, ErrorModel.incoherent())
                pr = simulate_noisy(F1, p, GateSemantics.PROJECTION, ErrorModel.incoherent())
                assert u[0] == pytest.approx(pr[0], abs=1e-12)
                assert u[1] == pytest.approx(pr[1], abs=1e-12)

    def test_incoherent_semantics_agree_for_all_oracles(self):
        gen = make_stream(33)
        for f in (F1, F2, OracleFunction.from_name("f3"), OracleFunction.from_name("f4")):
            p = random_params(gen, noiseless_h2=False)
            u = simulate_noisy(f, p, GateSemantics.UNITARY, ErrorModel.incoherent())
            pr = simulate_noisy(f, p, GateSemantics.PROJECTION, ErrorModel.incoherent())
            assert u[1] == pytest.approx(pr[1], abs=1e-12)

    def test_phase_model_hand_cases(self):
        # H1 perfect: the first line reaches H3 as the ideal superposition,
        # whose image has no |1> component to twist, so any phase error on
        # H3 is invisible.
        p = NoiseParams(alpha=1.0, beta=0.0, mu=math.sqrt(0.5), kappa=math.sqrt(0.5))
        dist = simulate_noisy(F1, p, GateSemantics.UNITARY, ErrorModel.phase(1.1))
        assert dist[0] == pytest.approx(1.0, abs=1e-12)
        # H1 always errs (emits the phase-twisted superposition) and H3 is
        # perfect: the chain reduces to the single-line experiment, so
        # P(1) = sin^2(phi / 2) by direct expansion.
        phi = 2.0
        p = NoiseParams(alpha=0.0, beta=1.0, mu=1.0, kappa=0.0)
        dist = simulate_noisy(F1, p, GateSemantics.UNITARY, ErrorModel.phase(phi))
        assert dist[1] == pytest.approx(math.sin(phi / 2.0) ** 2, abs=1e-12)
        assert dist[1] == pytest.approx(
            phase_error_experiment(phi, GateSemantics.UNITARY)[1], abs=1e-12
        )

    def test_all_oracles_supported(self):
        p = NoiseParams.identical_gates(0.8)
        for name in ("f1", "f2", "f3", "f4"):
            f = OracleFunction.from_name(name)
            for semantics in GateSemantics:
                dist = simulate_noisy(f, p, semantics, ErrorModel.coherent())
                assert dist[0] + dist[1] == pytest.approx(1.0, abs=1e-12)


class TestMcRun:
    def test_noiseless_frequency_is_exactly_one(self):
        result = mc_run(F1, NoiseParams.noiseless(), GateSemantics.UNITARY,
                        ErrorModel.coherent(), trials=1000, seed=3)
        assert result.empirical[0] == 1.0
        assert result.std_error == 0.0

    def test_within_four_sigma_of_exact_law(self):
        result = mc_run(F1, NoiseParams.identical_gates(0.9), GateSemantics.UNITARY,
                        ErrorModel.coherent(), trials=100_000, seed=42)
        assert result.within(4.0)
        assert abs(result.empirical[1] - 1.0 / 37.0) <= 4.0 * result.std_error

    def test_projection_sampling_follows_enumeration(self):
        result = mc_run(F1, NoiseParams.identical_gates(0.9), GateSemantics.PROJECTION,
                        ErrorModel.coherent(), trials=100_000, seed=7)
        assert result.exact[0] == pytest.approx(0.82, abs=1e-12)
        assert result.within(4.0)

    def test_same_seed_reproduces(self):
        args = (F1, NoiseParams.identical_gates(0.7), GateSemantics.PROJECTION,
                ErrorModel.coherent())
        a = mc_run(*args, trials=5000, seed=11)
        b = mc_run(*args, trials=5000, seed=11)
        assert a.empirical == b.empirical

    def test_zero_trials_rejected(self):
        with pytest.raises(ValueError):
            mc_run(F1, NoiseParams.noiseless(), GateSemantics.UNITARY,
                   ErrorModel.coherent(), trials=0, seed=1)


class TestSweep:
    def test_reference_row(self):
        rows = sweep(0.5, 1.0, 6)
        assert len(rows) == 6
        row = rows[4]
        assert row.alpha2 == pytest.approx(0.9)
        assert row.prob1 == pytest.approx(1.0 / 37.0, abs=1e-12)
        assert row.single_gate_err == pytest.approx(0.1)
        assert row.ratio == pytest.approx(10.0 / 37.0, abs=1e-10)

    def test_rows_are_complementary(self):
        for row in sweep(0.0, 1.0, 101):
            assert row.prob0 + row.prob1 == pytest.approx(1.0, abs=1e-10)

    def test_endpoints(self):
        rows = sweep(0.0, 1.0, 2)
        assert [row.alpha2 for row in rows] == [0.0, 1.0]
        assert rows[0].ratio == pytest.approx(1.0)
        assert rows[1].ratio is None

    def test_bad_ranges_rejected(self):
        with pytest.raises(ValueError):
            sweep(0.9, 0.1, 5)
        with pytest.raises(ValueError):
            sweep(0.0, 1.2, 5)
        with pytest.raises(ValueError):
            sweep(0.0, 1.0, 1)


class TestPhaseErrorExperiment:
    def test_no_error_either_semantics(self):
        for semantics in GateSemantics:
            dist = phase_error_experiment(0.0, semantics)
            assert dist[0] == pytest.approx(1.0, abs=1e-12)

    def test_pi_flips_unitary_outcome(self):
        dist = phase_error_experiment(math.pi, GateSemantics.UNITARY)
        assert dist[0] == pytest.approx(0.0, abs=1e-12)
        assert dist[1] == pytest.approx(1.0, abs=1e-12)

    def test_unitary_interference_curve(self):
        for phi in np.linspace(0.0, 2.0 * math.pi, 17)[:-1]:
            dist = phase_error_experiment(float(phi), GateSemantics.UNITARY)
            assert dist[0] == pytest.approx(math.cos(phi / 2.0) ** 2, abs=1e-12)

    def test_projection_distribution_is_phase_independent(self):
        reference = phase_error_experiment(0.0, GateSemantics.PROJECTION)
        for k in range(8):
            dist = phase_error_experiment(k * math.pi / 4.0, GateSemantics.PROJECTION)
            assert dist[0] == pytest.approx(reference[0], abs=1e-12)
            assert dist[1] == pytest.approx(reference[1], abs=1e-12)

    def test_total_variation_between_extremes(self):
        at_zero = phase_error_experiment(0.0, GateSemantics.UNITARY)
        at_pi = phase_error_experiment(math.pi, GateSemantics.UNITARY)
        tv = 0.5 * (abs(at_zero[0] - at_pi[0]) + abs(at_zero[1] - at_pi[1]))
        assert tv == pytest.approx(1.0, abs=1e-12)

    def test_phi_out_of_range(self):
        with pytest.raises(ValueError):
            phase_error_experiment(-0.1, GateSemantics.UNITARY)
        with pytest.raises(ValueError):
            phase_error_experiment(2.0 * math.pi, GateSemantics.UNITARY)
