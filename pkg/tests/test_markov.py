import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lamp_entropy import (
    DimensionMismatchError,
    DuplicateLabelError,
    InvalidInitStateError,
    NegativeEntryError,
    NonSquareError,
    NotIrreducibleError,
    RowSumError,
    StateSpace,
    StationaryDistribution,
    TransitionMatrix,
    entropy_rate,
    is_irreducible,
    load_matrix_csv,
    load_matrix_json,
    save_matrix_csv,
    save_matrix_json,
    simulate_markov,
    stationary_distribution,
    validate_stochastic,
)

# Hand-solved fixed point of [[0.5, 0.5], [1, 0]]: pi = pi P gives
# pi_0 = 0.5 pi_0 + pi_1 and pi_0 + pi_1 = 1, so pi = (2/3, 1/3).
PI_LAZY_RESET = np.array([2 / 3, 1 / 3])

# Binary entropy of 0.1: -(0.9 log2 0.9 + 0.1 log2 0.1).
H_BINARY_01 = 0.4689955935892812


def random_ergodic(n, rng, floor=0.1):
    rows = (1 - floor) * rng.dirichlet(np.ones(n), size=n) + floor / n
    return validate_stochastic(rows, [f"s{i}" for i in range(n)])


class TestValidateStochastic:
    def test_valid_matrix(self):
        P = validate_stochastic([[0.5, 0.5], [1.0, 0.0]], ["a", "b"])
        assert P.labels == ("a", "b")
        assert np.allclose(P.rows.sum(axis=1), 1.0)

    def test_single_state(self):
        P = validate_stochastic([[1.0]], ["a"])
        assert P.n == 1

    def test_row_sum_violation(self):
        with pytest.raises(RowSumError):
            validate_stochastic([[0.5, 0.6], [1.0, 0.0]], ["a", "b"])

    def test_non_square(self):
        with pytest.raises(NonSquareError):
            validate_stochastic([[0.5, 0.5]], ["a"])

    def test_label_count_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            validate_stochastic([[1.0]], ["a", "b"])

    def test_negative_entry(self):
        with pytest.raises(NegativeEntryError):
            validate_stochastic([[1.5, -0.5], [0.5, 0.5]], ["a", "b"])

    def test_duplicate_label(self):
        with pytest.raises(DuplicateLabelError):
            validate_stochastic([[0.5, 0.5], [0.5, 0.5]], ["a", "a"])

    def test_tiny_deviation_renormalised(self):
        P = validate_stochastic([[0.5, 0.5 + 1e-12], [1.0, 0.0]], ["a", "b"])
        assert abs(P.rows[0].sum() - 1.0) < 1e-15


class TestStationaryDistribution:
    def test_symmetric_chain(self):
        P = validate_stochastic([[0.9, 0.1], [0.1, 0.9]], ["a", "b"])
        pi = stationary_distribution(P)
        assert np.allclose(pi.probs, [0.5, 0.5], atol=1e-10)

    def test_lazy_reset_chain(self):
        P = validate_stochastic([[0.5, 0.5], [1.0, 0.0]], ["a", "b"])
        pi = stationary_distribution(P)
        assert np.abs(pi.probs - PI_LAZY_RESET).max() < 1e-9

    def test_single_state(self):
        P = validate_stochastic([[1.0]], ["a"])
        assert stationary_distribution(P).probs[0] == 1.0

    @pytest.mark.parametrize("method", ["direct", "power"])
    def test_fixed_point_residual(self, method):
        rng = np.random.default_rng(5)
        for n in (2, 3, 7):
            P = random_ergodic(n, rng)
            pi = stationary_distribution(P, method=method)
            assert np.abs(pi.probs @ P.rows - pi.probs).sum() < 1e-8

    def test_power_handles_periodic_chain(self):
        P = validate_stochastic([[0.0, 1.0], [1.0, 0.0]], ["a", "b"])
        pi = stationary_distribution(P, method="power")
        assert np.allclose(pi.probs, [0.5, 0.5], atol=1e-10)

    def test_relabelling_invariance(self):
        rng = np.random.default_rng(9)
        P = random_ergodic(4, rng)
        perm = [2, 0, 3, 1]
        relabelled = validate_stochastic(
            P.rows[np.ix_(perm, perm)], [P.labels[i] for i in perm]
        )
        pi = stationary_distribution(P).probs
        pi_rel = stationary_distribution(relabelled).probs
        assert np.abs(pi[perm] - pi_rel).max() < 1e-8

    def test_irreducibility_check(self):
        P = validate_stochastic([[1.0, 0.0], [0.0, 1.0]], ["a", "b"])
        with pytest.raises(NotIrreducibleError):
            stationary_distribution(P, check_irreducible=True)


class TestEntropyRate:
    def test_fair_coin_rows(self):
        P = validate_stochastic([[0.5, 0.5], [0.5, 0.5]], ["a", "b"])
        pi = StationaryDistribution(P.states, np.array([0.5, 0.5]))
        assert entropy_rate(P, pi) == 1.0

    def test_binary_entropy_value(self):
        P = validate_stochastic([[0.9, 0.1], [0.1, 0.9]], ["a", "b"])
        pi = stationary_distribution(P)
        assert abs(entropy_rate(P, pi) - H_BINARY_01) < 1e-6

    def test_lazy_reset_value(self):
        # (2/3) * H_b(0.5) + (1/3) * 0 = 2/3 bits.
        P = validate_stochastic([[0.5, 0.5], [1.0, 0.0]], ["a", "b"])
        pi = stationary_distribution(P)
        assert abs(entropy_rate(P, pi) - 2 / 3) < 1e-9

    def test_dimension_mismatch(self):
        P = validate_stochastic([[0.5, 0.5], [0.5, 0.5]], ["a", "b"])
        other = StationaryDistribution(StateSpace(("x", "y")), np.array([0.5, 0.5]))
        with pytest.raises(DimensionMismatchError):
            entropy_rate(P, other)

    def test_zero_iff_deterministic_rows(self):
        P = validate_stochastic([[0.0, 1.0], [1.0, 0.0]], ["a", "b"])
        pi = stationary_distribution(P)
        assert entropy_rate(P, pi) == 0.0
        rng = np.random.default_rng(3)
        noisy = random_ergodic(3, rng)
        assert entropy_rate(noisy, stationary_distribution(noisy)) > 0.0

    def test_maximal_for_uniform_rows(self):
        n = 4
        P = validate_stochastic(np.full((n, n), 1 / n), list("abcd"))
        pi = stationary_distribution(P)
        assert abs(entropy_rate(P, pi) - np.log2(n)) < 1e-12

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_bounded_by_log_n(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 6))
        P = random_ergodic(n, rng, floor=0.0)
        pi = stationary_distribution(P)
        h = entropy_rate(P, pi)
        assert 0.0 <= h <= np.log2(n) + 1e-12


class TestSimulateMarkov:
    def test_absorbing_single_state(self):
        P = validate_stochastic([[1.0]], ["a"])
        assert simulate_markov(P, 5, seed=0, init=0) == ["a"] * 5

    def test_deterministic_two_cycle(self):
        P = validate_stochastic([[0.0, 1.0], [1.0, 0.0]], ["a", "b"])
        assert simulate_markov(P, 4, seed=0, init=0) == ["a", "b", "a", "b"]

    def test_same_seed_same_path(self):
        rng = np.random.default_rng(1)
        P = random_ergodic(3, rng)
        assert simulate_markov(P, 500, seed=42) == simulate_markov(P, 500, seed=42)
        assert simulate_markov(P, 500, seed=42) != simulate_markov(P, 500, seed=43)

    def test_init_by_label(self):
        P = validate_stochastic([[0.0, 1.0], [1.0, 0.0]], ["a", "b"])
        assert simulate_markov(P, 3, seed=0, init="b") == ["b", "a", "b"]

    def test_invalid_init(self):
        P = validate_stochastic([[1.0]], ["a"])
        with pytest.raises(InvalidInitStateError):
            simulate_markov(P, 3, seed=0, init=5)
        with pytest.raises(InvalidInitStateError):
            simulate_markov(P, 3, seed=0, init="zzz")

    def test_empirical_frequencies_match_chain(self):
        P = validate_stochastic([[0.9, 0.1], [0.1, 0.9]], ["a", "b"])
        seq = simulate_markov(P, 10**6, seed=7)
        idx = P.states.encode(seq)
        freq_a = float((idx == 0).mean())
        assert abs(freq_a - 0.5) < 0.01
        pair_counts = np.zeros((2, 2))
        np.add.at(pair_counts, (idx[:-1], idx[1:]), 1)
        emp = pair_counts / pair_counts.sum(axis=1, keepdims=True)
        assert np.abs(emp - P.rows).max() < 0.01


class TestMatrixIO:
    def test_json_roundtrip(self, tmp_path):
        rng = np.random.default_rng(2)
        P = random_ergodic(4, rng)
        path = tmp_path / "m.json"
        save_matrix_json(P, path)
        back = load_matrix_json(path)
        assert back.labels == P.labels
        assert np.allclose(back.rows, P.rows, atol=1e-15)

    def test_csv_roundtrip(self, tmp_path):
        rng = np.random.default_rng(4)
        P = random_ergodic(3, rng)
        path = tmp_path / "m.csv"
        save_matrix_csv(P, path)
        back = load_matrix_csv(path)
        assert back.labels == P.labels
        assert np.array_equal(back.rows, P.rows)


def test_is_irreducible():
    assert is_irreducible(validate_stochastic([[0.0, 1.0], [1.0, 0.0]], ["a", "b"]))
    assert not is_irreducible(validate_stochastic([[1.0, 0.0], [0.0, 1.0]], ["a", "b"]))
    assert not is_irreducible(validate_stochastic([[0.5, 0.5], [0.0, 1.0]], ["a", "b"]))
