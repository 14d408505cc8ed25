import math

import numpy as np
import pytest

from lamp_entropy import (
    DegenerateInitError,
    EmptyCorpusError,
    KernelDistribution,
    LampModel,
    SequenceCorpus,
    TooShortError,
    count_transitions,
    fit_first_order,
    fit_lamp_em,
    lamp_log_likelihood,
    lamp_transition_distribution,
    log_loss,
    simulate_lamp,
    validate_stochastic,
)

from test_markov import random_ergodic


class TestCountTransitions:
    def test_single_sequence(self):
        corpus = SequenceCorpus.from_sequences([["a", "b", "a"]])
        counts = count_transitions(corpus).counts
        assert counts.tolist() == [[0, 1], [1, 0]]

    def test_no_counting_across_boundaries(self):
        corpus = SequenceCorpus.from_sequences([["a", "b"], ["b", "a"]])
        counts = count_transitions(corpus).counts
        assert counts.tolist() == [[0, 1], [1, 0]]

    def test_singleton_sequence_contributes_nothing(self):
        corpus = SequenceCorpus.from_sequences([["a"]])
        assert count_transitions(corpus).counts.sum() == 0


class TestFitFirstOrder:
    def test_deterministic_cycle(self):
        corpus = SequenceCorpus.from_sequences([["a", "b", "a"]])
        P = fit_first_order(corpus)
        assert P.rows.tolist() == [[0.0, 1.0], [1.0, 0.0]]

    def test_hand_ratios(self):
        # a->b three times, a->c once: row a is (0, 3/4, 1/4).
        corpus = SequenceCorpus.from_sequences(
            [["a", "b"], ["a", "b"], ["a", "b"], ["a", "c"]]
        )
        P = fit_first_order(corpus)
        row_a = P.rows[P.states.index_of("a")]
        assert row_a.tolist() == [0.0, 0.75, 0.25]

    def test_heavy_smoothing_approaches_uniform(self):
        corpus = SequenceCorpus.from_sequences([["a", "b", "a", "b"]])
        P = fit_first_order(corpus, smoothing=1e9)
        assert np.abs(P.rows - 0.5).max() < 1e-6

    def test_unseen_source_gets_uniform_row(self):
        # b never appears as a source.
        corpus = SequenceCorpus.from_sequences([["a", "b"]])
        P = fit_first_order(corpus)
        assert P.rows[P.states.index_of("b")].tolist() == [0.5, 0.5]

    def test_no_transitions(self):
        corpus = SequenceCorpus.from_sequences([["a"], ["b"]])
        with pytest.raises(EmptyCorpusError):
            fit_first_order(corpus)


class TestFitLampEm:
    def test_order_one_matches_closed_form_exactly(self):
        rng = np.random.default_rng(31)
        P = random_ergodic(3, rng)
        tokens = simulate_lamp(LampModel(P, KernelDistribution.point_mass(1)), 5000, seed=4)
        corpus = SequenceCorpus.from_sequences([tokens])
        report = fit_lamp_em(corpus, k=1)
        direct = fit_first_order(corpus, smoothing=0.0)
        assert np.array_equal(report.model.matrix.rows, direct.rows)
        assert report.model.kernel.weights.tolist() == [1.0]
        assert report.converged

    def test_trace_is_monotone(self):
        rng = np.random.default_rng(32)
        P = random_ergodic(3, rng)
        model = LampModel(P, KernelDistribution([0.6, 0.4]))
        corpus = SequenceCorpus.from_sequences([simulate_lamp(model, 20_000, seed=5)])
        report = fit_lamp_em(corpus, k=4, max_iter=40)
        trace = np.array(report.log_likelihood_trace)
        assert (np.diff(trace) >= -1e-9).all()

    def test_recovers_generator(self):
        P = validate_stochastic(
            [[0.7, 0.2, 0.1], [0.1, 0.7, 0.2], [0.2, 0.1, 0.7]], list("abc")
        )
        w = KernelDistribution([0.6, 0.4])
        tokens = simulate_lamp(LampModel(P, w), 30_000, seed=6)
        corpus = SequenceCorpus.from_sequences([tokens])
        report = fit_lamp_em(corpus, k=2)
        order = [report.model.matrix.states.index_of(l) for l in "abc"]
        P_hat = report.model.matrix.rows[np.ix_(order, order)]
        assert np.abs(P_hat - P.rows).max() < 0.08
        assert np.abs(report.model.kernel.weights - w.weights).max() < 0.08

    def test_degenerate_init(self):
        corpus = SequenceCorpus.from_sequences([["a", "b", "a"]])
        identity = validate_stochastic([[1.0, 0.0], [0.0, 1.0]], ["a", "b"])
        with pytest.raises(DegenerateInitError):
            fit_lamp_em(corpus, k=1, init=(KernelDistribution.point_mass(1), identity))

    def test_short_sequence_rejected(self):
        corpus = SequenceCorpus.from_sequences([["a", "b"], ["a"]])
        with pytest.raises(TooShortError):
            fit_lamp_em(corpus, k=2)

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(33)
        P = random_ergodic(3, rng)
        model = LampModel(P, KernelDistribution([0.5, 0.5]))
        tokens = simulate_lamp(model, 10_000, seed=7)
        corpus = SequenceCorpus.from_sequences([tokens])
        renamed = SequenceCorpus.from_sequences(
            [[f"<{t}>" for t in seq] for seq in corpus.sequences]
        )
        a = fit_lamp_em(corpus, k=2)
        b = fit_lamp_em(renamed, k=2)
        order = [b.model.matrix.states.index_of(f"<{l}>") for l in a.model.labels]
        assert np.abs(a.model.matrix.rows - b.model.matrix.rows[np.ix_(order, order)]).max() < 1e-9
        assert np.abs(a.model.kernel.weights - b.model.kernel.weights).max() < 1e-9
        assert abs(a.log_likelihood_trace[-1] - b.log_likelihood_trace[-1]) < 1e-9


class TestLampLogLikelihood:
    def test_deterministic_chain_zero(self):
        P = validate_stochastic([[0.0, 1.0], [1.0, 0.0]], ["a", "b"])
        model = LampModel(P, KernelDistribution.point_mass(1))
        corpus = SequenceCorpus.from_sequences([["a", "b", "a", "b"]])
        assert lamp_log_likelihood(model, corpus) == 0.0

    def test_uniform_rows_cost_log_n_per_position(self):
        n = 4
        P = validate_stochastic(np.full((n, n), 1 / n), list("abcd"))
        model = LampModel(P, KernelDistribution.uniform(3))
        corpus = SequenceCorpus.from_sequences([["a", "b", "c"], ["d", "a"]])
        scored = corpus.total_tokens - corpus.n_sequences
        assert lamp_log_likelihood(model, corpus) == -scored * math.log2(n)

    def test_point_mass_kernel_matches_log_loss(self):
        # With a single lag the per-symbol likelihood and the transition
        # surprisal coincide.
        rng = np.random.default_rng(34)
        P = random_ergodic(3, rng)
        model = LampModel(P, KernelDistribution.point_mass(2))
        seq = simulate_lamp(model, 2000, seed=8)
        corpus = SequenceCorpus.from_sequences([seq])
        scored = len(seq) - 1
        assert lamp_log_likelihood(model, corpus) == pytest.approx(
            -scored * log_loss(model, seq, burn_in=0), rel=1e-12
        )

    def test_matches_bruteforce_mixture_oracle(self):
        rng = np.random.default_rng(35)
        P = random_ergodic(3, rng)
        model = LampModel(P, KernelDistribution([0.3, 0.5, 0.2]))
        seq = simulate_lamp(model, 200, seed=9)
        corpus = SequenceCorpus.from_sequences([seq])
        expected = 0.0
        for t in range(1, len(seq)):
            dist = lamp_transition_distribution(model, seq[:t])
            expected += math.log2(dist[model.matrix.states.index_of(seq[t])])
        assert lamp_log_likelihood(model, corpus) == pytest.approx(expected, abs=1e-9)
