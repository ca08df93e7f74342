import math
import random
from fractions import Fraction as F

import pytest

from urnlab.core import Bet, DrawOutcome, ExperimentConfig, all_acts, enumerate_rules
from urnlab.engine import (
    EVENT_BETTING_DRAW,
    EVENT_INFO_DRAW,
    EVENT_PARTICIPANT_JOINED,
    EVENT_PHASE_ADVANCED,
    EVENT_QUESTIONNAIRE_ANSWER,
    EVENT_RULE_SUBMITTED,
    DuplicateError,
    EllsbergType,
    MaxminAgent,
    Phase,
    SeuAgent,
    SessionError,
    UniformRandom,
    WrongPhaseError,
    WrongRoleError,
    advance,
    events_from_ndjson,
    events_to_ndjson,
    new_session,
    replay,
    resolve_bet,
    simulate_outcomes,
    simulate_population,
)
from urnlab.preferences import Prior
from urnlab.stats import aggregate
from conftest import rule


def apply(session, kind, payload):
    return advance(session, session.next_event(kind, payload, timestamp=1.0))


@pytest.fixture
def ready_session():
    """Session with one monitor and two subjects, still in Setup."""
    s = new_session("t1", timestamp=0.0)
    s = apply(s, EVENT_PARTICIPANT_JOINED, {"participant_id": "mon", "role": "monitor"})
    s = apply(s, EVENT_PARTICIPANT_JOINED, {"participant_id": "a", "role": "subject"})
    s = apply(s, EVENT_PARTICIPANT_JOINED, {"participant_id": "b", "role": "subject"})
    return s


def run_to_phase(s, phase):
    steps = {
        Phase.ELICITATION: [
            (EVENT_PHASE_ADVANCED, {"to": "Elicitation", "by": "mon"}),
        ],
        Phase.INFORMATIONAL_DRAWS: [
            (EVENT_RULE_SUBMITTED, {"participant_id": "a", "rule": "GWWY"}),
            (EVENT_RULE_SUBMITTED, {"participant_id": "b", "rule": "GGYY"}),
            (EVENT_PHASE_ADVANCED, {"to": "InformationalDraws", "by": "mon"}),
        ],
        Phase.BET_RESOLUTION: [
            (EVENT_INFO_DRAW, {"color": "Y", "by": "mon"}),
            (EVENT_INFO_DRAW, {"color": "G", "by": "mon"}),
            (EVENT_PHASE_ADVANCED, {"to": "BetResolution", "by": "mon"}),
        ],
        Phase.PAYOUT: [
            (EVENT_BETTING_DRAW, {"urn": "ambiguous", "color": "G", "by": "mon"}),
            (EVENT_BETTING_DRAW, {"urn": "risky", "color": "R", "by": "mon"}),
            (EVENT_PHASE_ADVANCED, {"to": "Payout", "by": "mon"}),
        ],
        Phase.QUESTIONNAIRE: [
            (EVENT_PHASE_ADVANCED, {"to": "Questionnaire", "by": "mon"}),
        ],
        Phase.CLOSED: [
            (EVENT_PHASE_ADVANCED, {"to": "Closed", "by": "mon"}),
        ],
    }
    for target in Phase:
        if target is Phase.SETUP:
            continue
        for kind, payload in steps[target]:
            s = apply(s, kind, payload)
        if target is phase:
            return s
    return s


class TestSessionFlow:
    def test_rule_recorded_during_elicitation(self, ready_session):
        s = run_to_phase(ready_session, Phase.ELICITATION)
        s = apply(s, EVENT_RULE_SUBMITTED, {"participant_id": "a", "rule": "GWWY"})
        assert s.participant("a").rule == rule("GWWY")

    def test_monitor_draw_entry_recorded(self, ready_session):
        s = run_to_phase(ready_session, Phase.BET_RESOLUTION)
        assert s.info_outcome is DrawOutcome.YG

    def test_bet_resolution_requires_informational_draws_first(self, ready_session):
        s = run_to_phase(ready_session, Phase.ELICITATION)
        s = apply(s, EVENT_RULE_SUBMITTED, {"participant_id": "a", "rule": "GWWY"})
        s = apply(s, EVENT_RULE_SUBMITTED, {"participant_id": "b", "rule": "GGYY"})
        s = apply(s, EVENT_PHASE_ADVANCED, {"to": "InformationalDraws", "by": "mon"})
        with pytest.raises(SessionError):
            apply(s, EVENT_PHASE_ADVANCED, {"to": "BetResolution", "by": "mon"})

    def test_elicitation_refuses_to_close_until_all_rules_in(self, ready_session):
        s = run_to_phase(ready_session, Phase.ELICITATION)
        s = apply(s, EVENT_RULE_SUBMITTED, {"participant_id": "a", "rule": "GWWY"})
        with pytest.raises(SessionError, match="elicitation incomplete"):
            apply(s, EVENT_PHASE_ADVANCED, {"to": "InformationalDraws", "by": "mon"})

    def test_rule_immutable_after_submission(self, ready_session):
        s = run_to_phase(ready_session, Phase.ELICITATION)
        s = apply(s, EVENT_RULE_SUBMITTED, {"participant_id": "a", "rule": "GWWY"})
        with pytest.raises(DuplicateError):
            apply(s, EVENT_RULE_SUBMITTED, {"participant_id": "a", "rule": "GGYY"})

    def test_rule_submission_outside_elicitation_rejected(self, ready_session):
        with pytest.raises(WrongPhaseError):
            apply(
                ready_session,
                EVENT_RULE_SUBMITTED,
                {"participant_id": "a", "rule": "GWWY"},
            )

    def test_only_monitor_enters_draws(self, ready_session):
        s = run_to_phase(ready_session, Phase.INFORMATIONAL_DRAWS)
        with pytest.raises(WrongRoleError):
            apply(s, EVENT_INFO_DRAW, {"color": "G", "by": "a"})

    def test_info_draws_set_exactly_once(self, ready_session):
        s = run_to_phase(ready_session, Phase.BET_RESOLUTION)
        with pytest.raises(WrongPhaseError):
            apply(s, EVENT_INFO_DRAW, {"color": "G", "by": "mon"})

    def test_third_info_draw_rejected(self, ready_session):
        s = run_to_phase(ready_session, Phase.INFORMATIONAL_DRAWS)
        s = apply(s, EVENT_INFO_DRAW, {"color": "Y", "by": "mon"})
        s = apply(s, EVENT_INFO_DRAW, {"color": "G", "by": "mon"})
        with pytest.raises(DuplicateError):
            apply(s, EVENT_INFO_DRAW, {"color": "G", "by": "mon"})

    def test_single_monitor_enforced(self, ready_session):
        with pytest.raises(DuplicateError):
            apply(
                ready_session,
                EVENT_PARTICIPANT_JOINED,
                {"participant_id": "mon2", "role": "monitor"},
            )

    def test_phase_order_enforced(self, ready_session):
        with pytest.raises(WrongPhaseError):
            apply(ready_session, EVENT_PHASE_ADVANCED, {"to": "Payout", "by": "mon"})

    def test_questionnaire_answer_recorded(self, ready_session):
        s = run_to_phase(ready_session, Phase.QUESTIONNAIRE)
        s = apply(
            s,
            EVENT_QUESTIONNAIRE_ANSWER,
            {"participant_id": "a", "hypothetical_answer": "White"},
        )
        assert s.participant("a").hypothetical_answer.value == "White"

    def test_full_run_reaches_closed(self, ready_session):
        s = run_to_phase(ready_session, Phase.CLOSED)
        assert s.phase is Phase.CLOSED
        assert s.resolution("a").executed_bet is Bet.WHITE
        assert s.resolution("a").won is False
        assert s.resolution("b").won is False  # Yellow bet, Green ball


class TestEventSourcing:
    def test_replay_reproduces_final_record(self, ready_session):
        s = run_to_phase(ready_session, Phase.CLOSED)
        assert replay(s.event_log) == s

    def test_replay_at_every_prefix(self, ready_session):
        s = run_to_phase(ready_session, Phase.PAYOUT)
        for cut in range(1, s.version + 1):
            partial = replay(s.event_log[:cut])
            assert partial.event_log == s.event_log[:cut]

    def test_ndjson_round_trip(self, ready_session):
        s = run_to_phase(ready_session, Phase.CLOSED)
        text = events_to_ndjson(s.event_log)
        assert replay(events_from_ndjson(text)) == s

    def test_failed_event_leaves_no_trace(self, ready_session):
        before = ready_session.version
        with pytest.raises(WrongPhaseError):
            apply(
                ready_session,
                EVENT_RULE_SUBMITTED,
                {"participant_id": "a", "rule": "GWWY"},
            )
        assert ready_session.version == before

    def test_event_seq_must_continue_log(self, ready_session):
        from urnlab.engine import Event

        stale = Event(seq=0, timestamp=0.0, kind=EVENT_PARTICIPANT_JOINED, payload={})
        with pytest.raises(SessionError):
            advance(ready_session, stale)

    def test_replay_requires_creation_event(self, ready_session):
        with pytest.raises(SessionError):
            replay(ready_session.event_log[1:])


class TestResolveBet:
    def test_lookup_and_loss(self):
        res = resolve_bet(rule("GWWY"), DrawOutcome.YG, ("G", "R"))
        assert res.executed_bet is Bet.WHITE
        assert not res.won
        assert res.payment == 5

    def test_green_win_pays_prize_plus_fee(self):
        res = resolve_bet(rule("GWWY"), DrawOutcome.GG, ("G", "R"))
        assert res.executed_bet is Bet.GREEN
        assert res.won
        assert res.payment == 15

    def test_yellow_win(self):
        res = resolve_bet(rule("GGYY"), DrawOutcome.YY, ("Y", "W"))
        assert res.executed_bet is Bet.YELLOW
        assert res.won and res.payment == 15

    def test_payment_always_fee_or_fee_plus_prize(self):
        cfg = ExperimentConfig(prize=F(7), show_up_fee=F(3))
        outcomes = set()
        for r in (rule("GWWY"), rule("GGYY"), rule("WWWW")):
            for info in DrawOutcome:
                for amb in "GY":
                    for risky in "RW":
                        res = resolve_bet(r, info, (amb, risky), cfg)
                        outcomes.add(res.payment)
        assert outcomes == {F(3), F(10)}

    def test_invalid_draws_rejected(self):
        with pytest.raises(ValueError):
            resolve_bet(rule("GGGG"), DrawOutcome.GG, ("W", "R"))
        with pytest.raises(ValueError):
            resolve_bet(rule("GGGG"), DrawOutcome.GG, ("G", "G"))


class TestSimulation:
    def test_ellsberg_population_is_all_awwd(self):
        ds, summary = simulate_population(
            [(EllsbergType(Bet.GREEN, Bet.YELLOW), 27)], F(1, 3), seed=5
        )
        table = aggregate(ds)
        assert table.pattern_count("aWWd") == 27
        assert summary.total == 27

    def test_maxmin_agents_choose_guaranteed_half(self):
        ds, _ = simulate_population([(MaxminAgent(), 40)], F(1, 2), seed=6)
        assert {r.rule.code for r in ds.records} <= {"GGYY", "GYGY"}

    def test_seu_agent_win_frequency_matches_act_value(self):
        prior = Prior(((F(1, 5), F(1, 5)), (F(9, 10), F(4, 5))))
        n = 100_000
        ds, summary = simulate_population([(SeuAgent(prior), n)], F(1, 3), seed=11)
        assert {r.rule.code for r in ds.records} == {"GGGY"}
        p = 13 / 27
        se = math.sqrt(p * (1 - p) / n)
        assert abs(summary.outcomes[0].win_rate - p) <= 4 * se

    def test_seeded_runs_are_bit_reproducible(self):
        spec = [(UniformRandom(seed=3), 50), (EllsbergType(Bet.GREEN, Bet.YELLOW), 5)]
        a = simulate_population(spec, F(2, 5), seed=99)
        b = simulate_population(spec, F(2, 5), seed=99)
        assert a == b

    def test_different_seeds_differ(self):
        spec = [(UniformRandom(), 50)]
        a, _ = simulate_population(spec, F(2, 5), seed=1)
        b, _ = simulate_population(spec, F(2, 5), seed=2)
        assert a != b

    def test_aggregate_total_equals_population(self):
        ds, summary = simulate_population(
            [(UniformRandom(seed=1), 33), (MaxminAgent(), 9)], F(1, 2), seed=4
        )
        assert aggregate(ds).total == 42 == summary.total

    def test_simulate_outcomes_zero_probability(self):
        wins = simulate_outcomes(rule("GGGG"), 0, 1000, random.Random(1))
        assert wins == 0
