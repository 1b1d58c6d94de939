import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from ids_lexicase.core import (
    CaseDistanceMatrix,
    DimensionError,
    SolveMatrix,
    compute_case_distances,
)
from ids_lexicase.rng import RunRngs, stream_rng
from ids_lexicase.selection import (
    StrategyConfig,
    StrategyKind,
    farthest_first_downsample,
    informed_downsample_sparse,
    lexicase_select,
    random_downsample,
    selection_probability_oracle,
)
from ids_lexicase.vm import Individual

from conftest import EXAMPLE_DISTANCES


def dummy_pop(n):
    return [Individual((), i) for i in range(n)]


def empirical_vs_oracle(solves, n_events, seed):
    """Selection counts from real events plus exact probabilities."""
    pop = dummy_pop(solves.n_individuals)
    rng = stream_rng(seed, "selection")
    picks = lexicase_select(pop, solves, n_events, rng)
    counts = np.bincount([p.id for p in picks], minlength=len(pop))
    return counts, selection_probability_oracle(solves)


def assert_frequencies_match(counts, probs, n_events, p_floor=0.001):
    # individuals with zero probability must never be selected
    assert not counts[probs == 0].any()
    keep = probs > 0
    expected = probs[keep] * n_events
    observed = counts[keep].astype(float)
    # merge rare bins so the chi-square approximation holds
    if (expected < 5).any():
        big = expected >= 5
        observed = np.append(observed[big], observed[~big].sum())
        expected = np.append(expected[big], expected[~big].sum())
    _, p = chisquare(observed, expected)
    assert p > p_floor


class TestLexicaseSelect:
    def test_dominant_individual_always_selected(self):
        solves = SolveMatrix(np.array([[1, 0], [1, 1], [1, 0]], dtype=np.uint8))
        picks = lexicase_select(dummy_pop(2), solves, 200, stream_rng(0, "selection"))
        assert all(p.id == 0 for p in picks)

    def test_all_zero_matrix_selects_uniformly(self):
        solves = SolveMatrix(np.zeros((4, 6), dtype=np.uint8))
        counts, probs = empirical_vs_oracle(solves, 60_000, seed=1)
        assert np.allclose(probs, 1 / 6)
        assert_frequencies_match(counts, probs, 60_000)

    def test_worked_example_matches_oracle(self, example_solves):
        n_events = 100_000
        counts, probs = empirical_vs_oracle(example_solves, n_events, seed=2)
        assert_frequencies_match(counts, probs, n_events)
        # every frequency within 3 sigma of its exact probability
        sigma = np.sqrt(probs * (1 - probs) / n_events)
        freq = counts / n_events
        assert (np.abs(freq - probs) <= 3 * sigma + 1e-12).all()

    def test_empty_population_rejected(self):
        with pytest.raises(ValueError):
            lexicase_select([], SolveMatrix(np.zeros((1, 1))), 1, stream_rng(0, "selection"))

    def test_matrix_population_mismatch_rejected(self):
        with pytest.raises(DimensionError):
            lexicase_select(dummy_pop(3), SolveMatrix(np.zeros((2, 2))), 1,
                            stream_rng(0, "selection"))


class TestSelectionProbabilityOracle:
    def test_single_individual(self):
        probs = selection_probability_oracle(SolveMatrix(np.array([[1], [0]])))
        assert probs.tolist() == [1.0]

    def test_complementary_specialists_split_evenly(self):
        solves = SolveMatrix(np.array([[1, 0], [0, 1]], dtype=np.uint8))
        probs = selection_probability_oracle(solves)
        assert np.allclose(probs, [0.5, 0.5])

    def test_probabilities_sum_to_one(self, example_solves):
        probs = selection_probability_oracle(example_solves)
        assert abs(probs.sum() - 1.0) < 1e-12

    def test_too_many_cases_rejected(self):
        with pytest.raises(ValueError):
            selection_probability_oracle(SolveMatrix(np.zeros((9, 2))))


class TestRandomDownsample:
    def test_paper_scale_sizes(self):
        rng = stream_rng(3, "sampling")
        assert len(random_downsample(200, 0.05, rng)) == 10
        assert len(random_downsample(200, 0.1, rng)) == 20

    def test_full_rate_is_a_permutation(self):
        ds = random_downsample(12, 1.0, stream_rng(4, "sampling"))
        assert sorted(ds.case_indices) == list(range(12))

    def test_zero_size_clamps_with_warning(self):
        with pytest.warns(UserWarning):
            ds = random_downsample(3, 0.1, stream_rng(5, "sampling"))
        assert len(ds) == 1

    @given(st.integers(1, 60), st.floats(0.01, 1.0), st.integers(0, 2**32 - 1))
    @settings(max_examples=150)
    def test_always_distinct_and_sized(self, n_train, r, seed):
        ds = random_downsample(n_train, round(r, 3), stream_rng(seed, "sampling"))
        assert len(set(ds.case_indices)) == len(ds.case_indices) == ds.target_size
        assert all(0 <= i < n_train for i in ds.case_indices)


class TestFarthestFirst:
    def test_worked_example_forced_first_pick(self):
        dist = CaseDistanceMatrix(EXAMPLE_DISTANCES.copy(), max_distance=6)
        ds = farthest_first_downsample(dist, 5, 3 / 5, stream_rng(6, "sampling"),
                                       first_case=0)
        assert ds.case_indices == (0, 2, 1)

    def test_all_zero_distances_fill_randomly(self):
        dist = CaseDistanceMatrix(np.zeros((20, 20), dtype=np.int64), max_distance=4)
        seen = set()
        for seed in range(40):
            ds = farthest_first_downsample(dist, 20, 0.25, stream_rng(seed, "sampling"))
            assert len(set(ds.case_indices)) == 5
            seen.add(ds.case_indices)
        assert len(seen) > 1  # genuinely random, not a fixed subset

    def test_full_target_is_a_permutation(self):
        dist = CaseDistanceMatrix(EXAMPLE_DISTANCES.copy(), max_distance=6)
        ds = farthest_first_downsample(dist, 5, 1.0, stream_rng(7, "sampling"))
        assert sorted(ds.case_indices) == list(range(5))

    def test_dimension_mismatch_rejected(self):
        dist = CaseDistanceMatrix(np.zeros((4, 4), dtype=np.int64), max_distance=1)
        with pytest.raises(DimensionError):
            farthest_first_downsample(dist, 5, 0.5, stream_rng(8, "sampling"))

    def test_sentinel_state_gives_uniform_random_subset(self):
        # before any distance computation every pair ties at the sentinel,
        # so the traversal degenerates to uniform sampling
        dist = CaseDistanceMatrix.maximally_far(30, sentinel=11)
        counts = np.zeros(30)
        for seed in range(400):
            ds = farthest_first_downsample(dist, 30, 0.2, stream_rng(seed, "sampling"))
            counts[list(ds.case_indices)] += 1
        freq = counts / 400
        sigma = np.sqrt(0.2 * 0.8 / 400)
        assert (np.abs(freq - 0.2) < 5 * sigma).all()

    def _grouped_matrix(self, rng, n_cases, n_groups, n_individuals=16):
        """Random solve matrix whose rows fall into known behavior groups."""
        while True:
            patterns = rng.integers(0, 2, size=(n_groups, n_individuals)).astype(np.uint8)
            if len({p.tobytes() for p in patterns}) == n_groups:
                break
        labels = np.concatenate([
            np.arange(n_groups),  # every group occupied
            rng.integers(0, n_groups, size=n_cases - n_groups),
        ])
        rng.shuffle(labels)
        return SolveMatrix(patterns[labels]), labels

    def test_one_representative_per_group_before_fill(self):
        rng = np.random.default_rng(99)
        for trial in range(100):
            n_groups = int(rng.integers(2, 7))
            n_cases = int(rng.integers(n_groups + 4, 25))
            solves, labels = self._grouped_matrix(rng, n_cases, n_groups)
            dist = compute_case_distances(solves)
            target_r = (n_groups + 2) / n_cases
            ds = farthest_first_downsample(dist, n_cases, target_r,
                                           stream_rng(trial, "sampling"))
            first_groups = [labels[i] for i in ds.case_indices[:n_groups]]
            assert sorted(first_groups) == list(range(n_groups))

    @staticmethod
    def _distinct_distance_matrix(rng, n):
        """Symmetric matrix with all-distinct positive off-diagonal entries,
        so the traversal is tie-free until a synonymous copy is added."""
        n_pairs = n * (n - 1) // 2
        vals = rng.permutation(np.arange(1, n_pairs + 1))
        d = np.zeros((n, n), dtype=np.int64)
        d[np.triu_indices(n, k=1)] = vals
        return d + d.T

    def test_duplicated_case_does_not_displace_distinct_cases(self):
        # appending a synonymous copy of one case must not change which of
        # the other cases get picked before the random fill begins (fixed
        # sampling stream, forced first pick, tie-free base matrix)
        rng = np.random.default_rng(5)
        for trial in range(50):
            n, target = 10, 6
            base = self._distinct_distance_matrix(rng, n)
            dup_of = int(rng.integers(n))
            with_dup = np.zeros((n + 1, n + 1), dtype=np.int64)
            with_dup[:n, :n] = base
            with_dup[n, :n] = base[dup_of]
            with_dup[:n, n] = base[dup_of]
            with_dup[n, dup_of] = with_dup[dup_of, n] = 0

            first = (dup_of + 1) % n
            ds1 = farthest_first_downsample(
                CaseDistanceMatrix(base, max_distance=n), n, target / n,
                stream_rng(trial, "sampling"), first_case=first)
            ds2 = farthest_first_downsample(
                CaseDistanceMatrix(with_dup, max_distance=n), n + 1,
                target / (n + 1), stream_rng(trial, "sampling"), first_case=first)
            assert len(ds1) == len(ds2) == target
            twins = {dup_of, n}
            assert set(ds1.case_indices) - twins == set(ds2.case_indices) - twins


class TestStrategyConfig:
    def test_downsampling_requires_rate(self):
        with pytest.raises(ValueError):
            StrategyConfig(StrategyKind.RANDOM_DS)
        with pytest.raises(ValueError):
            StrategyConfig(StrategyKind.INFORMED_DS, r=0.1)
        StrategyConfig(StrategyKind.LEXICASE)
        StrategyConfig(StrategyKind.INFORMED_DS, r=0.1, rho=0.01, k=10)

    def test_labels(self):
        assert StrategyConfig(StrategyKind.LEXICASE).label() == "lexicase"
        assert "r0.05" in StrategyConfig(StrategyKind.RANDOM_DS, r=0.05).label()


class TestInformedDownsampleSparse:
    def _setup(self, n_pop=20, n_train=15, seed=0):
        from ids_lexicase.problems import generate_case_sets, get_problem
        from ids_lexicase.vm import evaluate_population, random_plushy

        problem = get_problem("fizz_buzz")
        train, _ = generate_case_sets(problem, n_train, 5,
                                      stream_rng(seed, "problem-generation"))
        pool = problem.token_pool()
        rng = stream_rng(seed, "variation")
        pop = [Individual(random_plushy(rng, pool, 40), i) for i in range(n_pop)]
        evaluate = lambda parents, cases: evaluate_population(parents, cases, problem, 200)
        return pop, train, evaluate

    def test_schedule_recomputes_only_on_k_boundaries(self):
        pop, train, evaluate = self._setup()
        calls = []

        def counting_evaluate(parents, cases):
            calls.append(len(parents))
            return evaluate(parents, cases)

        config = StrategyConfig(StrategyKind.INFORMED_DS, r=0.4, rho=0.5, k=10)
        state = CaseDistanceMatrix.maximally_far(len(train), sentinel=21)
        rngs = RunRngs.from_seed(1)
        used_total = 0
        for g in range(10):
            ds, state, used = informed_downsample_sparse(
                pop, train.cases, config, g, state, rngs, counting_evaluate)
            used_total += used
            assert len(ds) == 6
        assert calls == [10]  # ceil(0.5 * 20) parents, generation 0 only
        assert used_total == 10 * len(train)

    def test_parent_sample_size_rounds_up(self):
        pop, train, evaluate = self._setup(n_pop=20)
        config = StrategyConfig(StrategyKind.INFORMED_DS, r=0.4, rho=0.01, k=1)
        state = CaseDistanceMatrix.maximally_far(len(train), sentinel=21)
        _, _, used = informed_downsample_sparse(
            pop, train.cases, config, 0, state, RunRngs.from_seed(2), evaluate)
        assert used == 1 * len(train)  # ceil(0.01 * 20) = 1 parent

    def test_wrong_strategy_kind_rejected(self):
        pop, train, evaluate = self._setup()
        config = StrategyConfig(StrategyKind.RANDOM_DS, r=0.4)
        state = CaseDistanceMatrix.maximally_far(len(train), sentinel=21)
        with pytest.raises(ValueError):
            informed_downsample_sparse(pop, train.cases, config, 0, state,
                                       RunRngs.from_seed(3), evaluate)

    def test_full_information_equals_direct_farthest_first(self):
        from ids_lexicase.vm import evaluate_population

        for seed in range(5):
            pop, train, evaluate = self._setup(n_pop=25, n_train=12, seed=seed)
            config = StrategyConfig(StrategyKind.INFORMED_DS, r=0.5, rho=1.0, k=1)
            state = CaseDistanceMatrix.maximally_far(len(train), sentinel=26)
            rngs = RunRngs.from_seed(100 + seed)
            ds_sparse, _, used = informed_downsample_sparse(
                pop, train.cases, config, 0, state, rngs, evaluate)
            assert used == 25 * 12

            solves = evaluate(pop, train.cases)
            ds_direct = farthest_first_downsample(
                compute_case_distances(solves), len(train), 0.5,
                stream_rng(100 + seed, "sampling"))
            assert ds_sparse.case_indices == ds_direct.case_indices
