import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ids_lexicase.stats import (
    bonferroni_holm,
    compare_family,
    normal_cdf,
    significance_level,
    stars,
    two_proportion_z_test,
)


class TestNormalCdf:
    def test_published_values(self):
        # standard-table values, must agree to 1e-7 absolute
        assert abs(normal_cdf(1.96) - 0.9750021048517795) < 1e-7
        assert abs(normal_cdf(0.0) - 0.5) < 1e-12
        assert abs(normal_cdf(-1.6448536269514722) - 0.05) < 1e-7
        assert abs(normal_cdf(2.5758293035489004) - 0.995) < 1e-7


class TestTwoProportionZTest:
    def test_equal_proportions(self):
        z, p = two_proportion_z_test(30, 100, 30, 100)
        assert z == 0.0
        assert p == 0.5  # one-sided default

    def test_equal_proportions_two_sided(self):
        _, p = two_proportion_z_test(30, 100, 30, 100, alternative="two-sided")
        assert p == 1.0

    def test_strong_difference_is_significant(self):
        _, p = two_proportion_z_test(95, 100, 64, 100)
        assert p < 0.01

    def test_moderate_difference_survives_nothing_after_family_correction(self):
        # raw two-sided p ~ 0.0252; times a family of four ~ 0.101 > 0.1
        _, p = two_proportion_z_test(85, 100, 72, 100, alternative="two-sided")
        assert 0.02 < p < 0.03
        assert min(1.0, 4 * p) > 0.1

    def test_degenerate_pooled_proportion(self):
        assert two_proportion_z_test(0, 50, 0, 60) == (0.0, 1.0)
        assert two_proportion_z_test(50, 50, 60, 60) == (0.0, 1.0)

    def test_symmetry(self):
        z_ab, _ = two_proportion_z_test(40, 100, 25, 100)
        z_ba, _ = two_proportion_z_test(25, 100, 40, 100)
        assert math.isclose(z_ab, -z_ba)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            two_proportion_z_test(5, 0, 1, 10)
        with pytest.raises(ValueError):
            two_proportion_z_test(11, 10, 1, 10)
        with pytest.raises(ValueError):
            two_proportion_z_test(1, 10, 1, 10, alternative="less")


class TestBonferroniHolm:
    def test_hand_worked_step_down(self):
        # sorted [.01,.03,.04]; multipliers 3,2,1 -> [.03,.06,.04]; running
        # max -> [.03,.06,.06]; mapped back to input order
        assert bonferroni_holm([0.01, 0.04, 0.03]) == [0.03, 0.06, 0.06]

    def test_single_p_unchanged(self):
        assert bonferroni_holm([0.2]) == [0.2]

    def test_all_ones_stay_capped(self):
        assert bonferroni_holm([1.0, 1.0, 1.0]) == [1.0, 1.0, 1.0]

    def test_empty(self):
        assert bonferroni_holm([]) == []

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            bonferroni_holm([0.5, 1.5])

    @given(st.lists(st.floats(0, 1), max_size=12))
    @settings(max_examples=200)
    def test_adjusted_dominates_raw_and_is_monotone(self, ps):
        adj = bonferroni_holm(ps)
        assert all(0 <= a <= 1 for a in adj)
        assert all(a >= p for a, p in zip(adj, ps))
        ordered = sorted(zip(ps, adj))
        assert all(a1 <= a2 for (_, a1), (_, a2) in zip(ordered, ordered[1:]))


class TestStars:
    def test_levels_nest(self):
        assert stars(0.005) == "***"
        assert stars(0.03) == "**"
        assert stars(0.09) == "*"
        assert stars(0.2) == ""
        assert significance_level(0.005) == 0.01


class TestCompareFamily:
    def test_published_success_rows(self):
        # four informed configurations against the random baseline at one
        # (problem, rate); counts out of 100 runs each
        rows = {
            # baseline 64: full-information flop, then three strongly better
            "fizz_buzz": ((64, [2, 85, 94, 95]), ["", "***", "***", "***"]),
            # baseline 72: moderate gains, none survive the family correction
            "fuel_cost": ((72, [1, 83, 85, 83]), ["", "", "", ""]),
            # baseline 25: everything markedly better
            "count_odds": ((25, [43, 99, 100, 98]), ["***", "***", "***", "***"]),
            # baseline 8: flop plus three near-certain improvements
            "scrabble": ((8, [6, 69, 64, 75]), ["", "***", "***", "***"]),
            # baseline 74: no informative differences
            "gcd": ((74, [4, 76, 67, 69]), ["", "", "", ""]),
        }
        for name, ((base, entries), want) in rows.items():
            results = compare_family([(s, 100) for s in entries], (base, 100))
            got = [r.stars for r in results]
            assert got == want, f"{name}: {got} != {want}"

    def test_worse_direction_carries_no_evidence(self):
        (res,) = compare_family([(2, 100)], (64, 100))
        assert res.p_raw == 1.0
        assert res.significant_at is None

    def test_adjusted_dominates_raw(self):
        results = compare_family([(80, 100), (75, 100)], (60, 100))
        for r in results:
            assert r.p_adjusted >= r.p_raw
