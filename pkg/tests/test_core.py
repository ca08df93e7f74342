import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urnlab import ratpoly as rp
from urnlab.core import (
    DEFAULT_CONFIG,
    ActPolynomial,
    Bet,
    ConfigError,
    DecisionRule,
    DomainError,
    DrawOutcome,
    ExperimentConfig,
    bet_win_prob,
    enumerate_rules,
    evaluate_act,
    induced_act,
    omega_grid,
    rule_index,
)
from conftest import rule


class TestBetWinProb:
    def test_white_is_composition_independent(self):
        for omega in (0, F(1, 3), F(7, 10), 1):
            assert bet_win_prob(Bet.WHITE, omega) == F(49, 100)

    def test_green_at_empty_green_urn(self):
        assert bet_win_prob(Bet.GREEN, 0) == 0

    def test_yellow_is_complement(self):
        assert bet_win_prob(Bet.YELLOW, F(1, 4)) == F(3, 4)

    def test_domain_error_outside_unit_interval(self):
        with pytest.raises(DomainError):
            bet_win_prob(Bet.GREEN, F(3, 2))
        with pytest.raises(DomainError):
            bet_win_prob(Bet.GREEN, -0.1)

    def test_custom_composition(self):
        cfg = ExperimentConfig(risky_white_count=30, risky_total=50)
        assert bet_win_prob(Bet.WHITE, F(1, 2), cfg) == F(3, 5)


class TestEnumerateRules:
    def test_81_distinct_rules(self, rules):
        assert len(rules) == 81
        assert len(set(rules)) == 81

    def test_first_is_all_green(self, rules):
        assert rules[0].code == "GGGG"

    def test_lexicographic_order_g_y_w(self, rules):
        order = {"G": 0, "Y": 1, "W": 2}
        keys = [tuple(order[ch] for ch in r.code) for r in rules]
        assert keys == sorted(keys)

    def test_exactly_16_rules_without_white(self, rules):
        # oracle: 2 choices at each of 4 positions
        assert sum(1 for r in rules if r.white_count == 0) == 2**4

    def test_rule_index_roundtrip(self, rules):
        assert [rule_index(r) for r in rules] == list(range(81))


class TestRuleCodes:
    def test_code_roundtrip(self, rules):
        for r in rules:
            assert DecisionRule.from_code(r.code) == r

    def test_lowercase_accepted(self):
        assert rule("gwwy").code == "GWWY"

    def test_bad_codes_rejected(self):
        for bad in ("GWW", "GWWYX", "ABCD", ""):
            with pytest.raises(ValueError):
                DecisionRule.from_code(bad)

    def test_bet_lookup(self):
        r = rule("GWWY")
        assert r.bet_for(DrawOutcome.GG) is Bet.GREEN
        assert r.bet_for(DrawOutcome.GY) is Bet.WHITE
        assert r.bet_for(DrawOutcome.YG) is Bet.WHITE
        assert r.bet_for(DrawOutcome.YY) is Bet.YELLOW


class TestInducedAct:
    def test_all_white_is_constant(self):
        act = induced_act(rule("WWWW"))
        assert act.coefficients == (F(49, 100), F(0), F(0), F(0))
        assert evaluate_act(act, F(7, 10)) == F(49, 100)

    def test_gggy_value_at_one_third(self):
        assert evaluate_act(induced_act(rule("GGGY")), F(1, 3)) == F(13, 27)

    def test_all_green_is_identity(self):
        act = induced_act(rule("GGGG"))
        assert act.coefficients == (F(0), F(1), F(0), F(0))
        assert evaluate_act(act, 0) == 0

    def test_ggyy_polynomial_from_symbolic_expansion(self):
        # oracle: expand w^2 + (1-w)^2 by hand and with the poly toolkit
        w = rp.poly([0, 1])
        one_minus = rp.poly([1, -1])
        expected = rp.add(rp.mul(w, w), rp.mul(one_minus, one_minus))
        act = induced_act(rule("GGYY"))
        assert act.poly == expected == (F(1), F(-2), F(2))
        # minimum 1/2 at omega = 1/2
        assert evaluate_act(act, F(1, 2)) == F(1, 2)

    def test_gyyy_value_at_two_thirds(self):
        assert evaluate_act(induced_act(rule("GYYY")), F(2, 3)) == F(13, 27)

    def test_evaluate_domain_error(self):
        act = induced_act(rule("GGGG"))
        with pytest.raises(DomainError):
            evaluate_act(act, F(11, 10))

    def test_coefficient_exactness(self, rules):
        # exact rationals, denominators dividing the risky-urn total
        for r in rules:
            for c in induced_act(r).coefficients:
                assert isinstance(c, F)
                assert 100 % c.denominator == 0

    def test_values_are_probabilities_on_grid(self, rules, acts):
        for r in rules:
            act = acts[r]
            for omega in omega_grid(50):
                assert 0 <= act(omega) <= 1

    def test_rejects_nonstandard_draw_count(self):
        cfg = ExperimentConfig(info_draw_count=3)
        with pytest.raises(ConfigError):
            induced_act(rule("GGGG"), cfg)


class TestColorSymmetry:
    def test_swap_is_involution(self, rules):
        for r in rules:
            assert r.color_swapped().color_swapped() == r

    def test_symmetry_identity_exact_all_rules(self, rules, acts):
        # pi(sigma(rule) | 1 - w) == pi(rule | w), exactly, on a dense grid
        for r in rules:
            swapped = acts[r.color_swapped()]
            original = acts[r]
            for omega in omega_grid(25):
                assert swapped(1 - omega) == original(omega)


class TestActSerialization:
    def test_json_round_trip(self, rules):
        for r in rules:
            act = induced_act(r)
            assert ActPolynomial.from_json(act.to_json()) == act

    def test_json_shape(self):
        data = induced_act(rule("WWWW")).to_json()
        assert data == ["49/100", "0/1", "0/1", "0/1"]


class TestExperimentConfig:
    def test_defaults(self):
        assert DEFAULT_CONFIG.risky_white_count == 49
        assert DEFAULT_CONFIG.risky_total == 100
        assert DEFAULT_CONFIG.prize == 10
        assert DEFAULT_CONFIG.show_up_fee == 5

    def test_rejects_bad_urn(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(risky_white_count=0)
        with pytest.raises(ConfigError):
            ExperimentConfig(risky_white_count=100, risky_total=100)

    def test_rejects_nonpositive_prize(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(prize=0)


class TestMonteCarloConsistency:
    def test_win_frequency_matches_act_value(self, acts):
        # full-protocol simulation agrees with the act polynomial
        from urnlab.engine import simulate_outcomes

        rules = enumerate_rules()
        rng = random.Random(4242)
        n = 100_000
        for i in range(3):  # three pairs here; ten in the acceptance suite
            r = rules[rng.randrange(81)]
            omega = F(rng.randrange(101), 100)
            p = float(acts[r](omega))
            wins = simulate_outcomes(r, omega, n, random.Random(100 + i))
            se = max(p * (1 - p) / n, 1e-12) ** 0.5
            assert abs(wins / n - p) <= 4 * se


@given(st.integers(min_value=0, max_value=80), st.fractions(min_value=0, max_value=1))
@settings(max_examples=200, deadline=None)
def test_act_value_equals_direct_formula(idx, omega):
    # independent route: weight each draw by its probability and the bet by
    # its win probability, all scalars, no polynomial algebra
    r = enumerate_rules()[idx]
    weights = {
        DrawOutcome.GG: omega * omega,
        DrawOutcome.GY: omega * (1 - omega),
        DrawOutcome.YG: (1 - omega) * omega,
        DrawOutcome.YY: (1 - omega) * (1 - omega),
    }
    direct = sum(
        weights[o] * bet_win_prob(r.bet_for(o), omega) for o in weights
    )
    assert evaluate_act(induced_act(r), omega) == direct
