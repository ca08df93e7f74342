"""Executable session protocol and population simulator.

A session is an append-only event log folded into a state snapshot:
participants join, every subject commits a full decision rule before any
draw happens (strategy method), the monitor then performs two
informational draws, the betting draws, and payouts follow mechanically.
Replaying the log from scratch reproduces the snapshot exactly, which is
what the service layer and its tests rely on.

Draws are either entered manually by the monitor (physical urns) or
generated from a seeded Mersenne Twister stream (``random.Random``), a
session-level mode recorded in the log.  Seeded runs are bit-reproducible
for a given seed; cross-implementation comparisons should assert
statistics, not streams.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .core import (
    DEFAULT_CONFIG,
    Bet,
    DecisionRule,
    DrawOutcome,
    ExperimentConfig,
    as_omega,
    enumerate_rules,
    rule_index,
)
from .preferences import MaxminEU, Prior, SEU, optimal_rules
from .stats import ChoiceDataset, ChoiceRecord, HypotheticalAnswer


class SessionError(Exception):
    """Base for protocol violations; sessions are left unchanged."""


class WrongPhaseError(SessionError):
    pass


class WrongRoleError(SessionError):
    pass


class DuplicateError(SessionError):
    pass


class UnknownParticipantError(SessionError):
    pass


class Phase(Enum):
    SETUP = "Setup"
    ELICITATION = "Elicitation"
    INFORMATIONAL_DRAWS = "InformationalDraws"
    BET_RESOLUTION = "BetResolution"
    PAYOUT = "Payout"
    QUESTIONNAIRE = "Questionnaire"
    CLOSED = "Closed"


PHASE_ORDER = tuple(Phase)


def next_phase(phase: Phase) -> Optional[Phase]:
    i = PHASE_ORDER.index(phase)
    return PHASE_ORDER[i + 1] if i + 1 < len(PHASE_ORDER) else None


class Role(Enum):
    SUBJECT = "subject"
    MONITOR = "monitor"


@dataclass(frozen=True)
class Event:
    seq: int
    timestamp: float
    kind: str
    payload: dict

    def to_json(self) -> str:
        return json.dumps(
            {"seq": self.seq, "ts": self.timestamp, "kind": self.kind, "payload": self.payload},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, line: str) -> "Event":
        obj = json.loads(line)
        return cls(seq=obj["seq"], timestamp=obj["ts"], kind=obj["kind"], payload=obj["payload"])


EVENT_SESSION_CREATED = "session_created"
EVENT_PARTICIPANT_JOINED = "participant_joined"
EVENT_PHASE_ADVANCED = "phase_advanced"
EVENT_RULE_SUBMITTED = "rule_submitted"
EVENT_INFO_DRAW = "info_draw"
EVENT_BETTING_DRAW = "betting_draw"
EVENT_QUESTIONNAIRE_ANSWER = "questionnaire_answer"


@dataclass(frozen=True)
class Participant:
    participant_id: str
    role: Role
    rule: Optional[DecisionRule] = None
    hypothetical_answer: Optional[HypotheticalAnswer] = None


@dataclass(frozen=True)
class BetResolution:
    executed_bet: Bet
    won: bool
    payment: Fraction


@dataclass(frozen=True)
class SessionRecord:
    """Snapshot of one session; value object, never mutated in place."""

    session_id: str
    mode: str  # "manual" or "seeded"
    seed: Optional[int]
    config: ExperimentConfig
    phase: Phase
    participants: tuple[Participant, ...]
    info_draws: tuple[str, ...]  # colors G/Y, at most two, order significant
    betting_ambiguous: Optional[str]  # G or Y
    betting_risky: Optional[str]  # R or W
    event_log: tuple[Event, ...]

    @property
    def version(self) -> int:
        return len(self.event_log)

    def participant(self, participant_id: str) -> Participant:
        for p in self.participants:
            if p.participant_id == participant_id:
                return p
        raise UnknownParticipantError(f"unknown participant {participant_id!r}")

    @property
    def monitor(self) -> Optional[Participant]:
        for p in self.participants:
            if p.role is Role.MONITOR:
                return p
        return None

    @property
    def subjects(self) -> tuple[Participant, ...]:
        return tuple(p for p in self.participants if p.role is Role.SUBJECT)

    @property
    def info_outcome(self) -> Optional[DrawOutcome]:
        if len(self.info_draws) == 2:
            return DrawOutcome("".join(self.info_draws))
        return None

    def executed_bet(self, participant_id: str) -> Optional[Bet]:
        p = self.participant(participant_id)
        if p.rule is None or self.info_outcome is None:
            return None
        return p.rule.bet_for(self.info_outcome)

    def resolution(self, participant_id: str) -> Optional[BetResolution]:
        p = self.participant(participant_id)
        if (
            p.rule is None
            or self.info_outcome is None
            or self.betting_ambiguous is None
            or self.betting_risky is None
        ):
            return None
        return resolve_bet(
            p.rule,
            self.info_outcome,
            (self.betting_ambiguous, self.betting_risky),
            self.config,
        )

    def next_event(self, kind: str, payload: dict, timestamp: Optional[float] = None) -> Event:
        return Event(
            seq=self.version,
            timestamp=time.time() if timestamp is None else timestamp,
            kind=kind,
            payload=payload,
        )


def resolve_bet(
    rule: DecisionRule,
    info: DrawOutcome,
    betting: tuple[str, str],
    cfg: ExperimentConfig = DEFAULT_CONFIG,
) -> BetResolution:
    """Look up the committed bet for the realized draws and settle it.

    ``betting`` is (ambiguous color G/Y, risky color R/W).  White wins on
    a White risky ball; Green/Yellow win on a matching ambiguous ball.
    Payment is always show-up fee plus prize-or-nothing.
    """
    ambiguous, risky = betting
    if ambiguous not in ("G", "Y"):
        raise ValueError(f"ambiguous betting draw must be G or Y, got {ambiguous!r}")
    if risky not in ("R", "W"):
        raise ValueError(f"risky betting draw must be R or W, got {risky!r}")
    executed = rule.bet_for(info)
    if executed is Bet.WHITE:
        won = risky == "W"
    elif executed is Bet.GREEN:
        won = ambiguous == "G"
    else:
        won = ambiguous == "Y"
    payment = cfg.show_up_fee + (cfg.prize if won else 0)
    return BetResolution(executed_bet=executed, won=won, payment=payment)


def new_session(
    session_id: str,
    mode: str = "manual",
    seed: Optional[int] = None,
    config: ExperimentConfig = DEFAULT_CONFIG,
    timestamp: Optional[float] = None,
    extra: Optional[dict] = None,
) -> SessionRecord:
    """Fresh session in Setup phase with its creation event logged."""
    if mode not in ("manual", "seeded"):
        raise ValueError(f"mode must be 'manual' or 'seeded', got {mode!r}")
    if mode == "seeded" and seed is None:
        raise ValueError("seeded mode requires a seed")
    payload = {
        "session_id": session_id,
        "mode": mode,
        "seed": seed,
        "config": {
            "risky_white_count": config.risky_white_count,
            "risky_total": config.risky_total,
            "prize": str(config.prize),
            "show_up_fee": str(config.show_up_fee),
            "info_draw_count": config.info_draw_count,
        },
    }
    if extra:
        payload.update(extra)
    event = Event(
        seq=0,
        timestamp=time.time() if timestamp is None else timestamp,
        kind=EVENT_SESSION_CREATED,
        payload=payload,
    )
    return SessionRecord(
        session_id=session_id,
        mode=mode,
        seed=seed,
        config=config,
        phase=Phase.SETUP,
        participants=(),
        info_draws=(),
        betting_ambiguous=None,
        betting_risky=None,
        event_log=(event,),
    )


def _require_monitor(session: SessionRecord, participant_id: str) -> None:
    p = session.participant(participant_id)
    if p.role is not Role.MONITOR:
        raise WrongRoleError(f"{participant_id!r} is not the monitor")


def advance(session: SessionRecord, event: Event) -> SessionRecord:
    """Apply one event, returning the new record; illegal events raise.

    The event's sequence number must continue the log, which makes replay
    append-only by construction.
    """
    if event.seq != session.version:
        raise SessionError(
            f"event seq {event.seq} does not continue log at {session.version}"
        )
    handler = _HANDLERS.get(event.kind)
    if handler is None:
        raise SessionError(f"unknown event kind {event.kind!r}")
    updated = handler(session, event.payload)
    return replace(updated, event_log=session.event_log + (event,))


def _on_participant_joined(session: SessionRecord, payload: dict) -> SessionRecord:
    if session.phase is not Phase.SETUP:
        raise WrongPhaseError("participants can only join during Setup")
    pid = payload["participant_id"]
    role = Role(payload["role"])
    if any(p.participant_id == pid for p in session.participants):
        raise DuplicateError(f"participant {pid!r} already joined")
    if role is Role.MONITOR and session.monitor is not None:
        raise DuplicateError("session already has a monitor")
    return replace(
        session, participants=session.participants + (Participant(pid, role),)
    )


def _on_phase_advanced(session: SessionRecord, payload: dict) -> SessionRecord:
    _require_monitor(session, payload["by"])
    target = Phase(payload["to"])
    expected = next_phase(session.phase)
    if expected is None or target is not expected:
        raise WrongPhaseError(
            f"cannot advance from {session.phase.value} to {target.value}"
        )
    if target is Phase.ELICITATION:
        if not session.subjects or session.monitor is None:
            raise SessionError("need at least one subject and a monitor to start")
    if target is Phase.INFORMATIONAL_DRAWS:
        missing = [p.participant_id for p in session.subjects if p.rule is None]
        if missing:
            raise SessionError(
                f"elicitation incomplete: no rule from {', '.join(missing)}"
            )
    if target is Phase.BET_RESOLUTION and session.info_outcome is None:
        raise SessionError("both informational draws must be entered first")
    if target is Phase.PAYOUT and (
        session.betting_ambiguous is None or session.betting_risky is None
    ):
        raise SessionError("both betting draws must be entered first")
    return replace(session, phase=target)


def _on_rule_submitted(session: SessionRecord, payload: dict) -> SessionRecord:
    if session.phase is not Phase.ELICITATION:
        raise WrongPhaseError("rules can only be submitted during Elicitation")
    pid = payload["participant_id"]
    p = session.participant(pid)
    if p.role is not Role.SUBJECT:
        raise WrongRoleError("only subjects submit rules")
    if p.rule is not None:
        raise DuplicateError(f"participant {pid!r} already submitted a rule")
    rule = DecisionRule.from_code(payload["rule"])
    updated = tuple(
        replace(q, rule=rule) if q.participant_id == pid else q
        for q in session.participants
    )
    return replace(session, participants=updated)


def _on_info_draw(session: SessionRecord, payload: dict) -> SessionRecord:
    if session.phase is not Phase.INFORMATIONAL_DRAWS:
        raise WrongPhaseError("informational draws happen in their own phase")
    _require_monitor(session, payload["by"])
    color = payload["color"]
    if color not in ("G", "Y"):
        raise ValueError(f"informational draw color must be G or Y, got {color!r}")
    if len(session.info_draws) >= 2:
        raise DuplicateError("both informational draws already entered")
    return replace(session, info_draws=session.info_draws + (color,))


def _on_betting_draw(session: SessionRecord, payload: dict) -> SessionRecord:
    if session.phase is not Phase.BET_RESOLUTION:
        raise WrongPhaseError("betting draws happen during BetResolution")
    _require_monitor(session, payload["by"])
    urn, color = payload["urn"], payload["color"]
    if urn == "ambiguous":
        if color not in ("G", "Y"):
            raise ValueError(f"ambiguous draw must be G or Y, got {color!r}")
        if session.betting_ambiguous is not None:
            raise DuplicateError("ambiguous betting draw already entered")
        return replace(session, betting_ambiguous=color)
    if urn == "risky":
        if color not in ("R", "W"):
            raise ValueError(f"risky draw must be R or W, got {color!r}")
        if session.betting_risky is not None:
            raise DuplicateError("risky betting draw already entered")
        return replace(session, betting_risky=color)
    raise ValueError(f"urn must be 'ambiguous' or 'risky', got {urn!r}")


def _on_questionnaire_answer(session: SessionRecord, payload: dict) -> SessionRecord:
    if session.phase is not Phase.QUESTIONNAIRE:
        raise WrongPhaseError("questionnaire answers belong to the Questionnaire phase")
    pid = payload["participant_id"]
    p = session.participant(pid)
    if p.role is not Role.SUBJECT:
        raise WrongRoleError("only subjects answer the questionnaire")
    if p.hypothetical_answer is not None:
        raise DuplicateError(f"participant {pid!r} already answered")
    answer = HypotheticalAnswer(payload["hypothetical_answer"])
    updated = tuple(
        replace(q, hypothetical_answer=answer) if q.participant_id == pid else q
        for q in session.participants
    )
    return replace(session, participants=updated)


_HANDLERS = {
    EVENT_PARTICIPANT_JOINED: _on_participant_joined,
    EVENT_PHASE_ADVANCED: _on_phase_advanced,
    EVENT_RULE_SUBMITTED: _on_rule_submitted,
    EVENT_INFO_DRAW: _on_info_draw,
    EVENT_BETTING_DRAW: _on_betting_draw,
    EVENT_QUESTIONNAIRE_ANSWER: _on_questionnaire_answer,
}


def replay(events: Sequence[Event]) -> SessionRecord:
    """Rebuild a session from its event log; deterministic by construction."""
    if not events or events[0].kind != EVENT_SESSION_CREATED:
        raise SessionError("log must start with a session_created event")
    created = events[0]
    cfgp = created.payload["config"]
    session = new_session(
        session_id=created.payload["session_id"],
        mode=created.payload["mode"],
        seed=created.payload["seed"],
        config=ExperimentConfig(
            risky_white_count=cfgp["risky_white_count"],
            risky_total=cfgp["risky_total"],
            prize=Fraction(cfgp["prize"]),
            show_up_fee=Fraction(cfgp["show_up_fee"]),
            info_draw_count=cfgp["info_draw_count"],
        ),
        timestamp=created.timestamp,
        extra={
            k: v
            for k, v in created.payload.items()
            if k not in ("session_id", "mode", "seed", "config")
        },
    )
    for event in events[1:]:
        session = advance(session, event)
    return session


def events_to_ndjson(events: Iterable[Event]) -> str:
    return "".join(e.to_json() + "\n" for e in events)


def events_from_ndjson(text: str) -> tuple[Event, ...]:
    return tuple(Event.from_json(line) for line in text.splitlines() if line.strip())


# --- population simulation ---------------------------------------------------


@dataclass(frozen=True)
class SeuAgent:
    prior: Prior


@dataclass(frozen=True)
class MaxminAgent:
    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(1)


@dataclass(frozen=True)
class EllsbergType:
    """Bets White after both mixed draws: the rule (a, W, W, d)."""

    a: Bet
    d: Bet

    @property
    def rule(self) -> DecisionRule:
        return DecisionRule((self.a, Bet.WHITE, Bet.WHITE, self.d))


@dataclass(frozen=True)
class UniformRandom:
    """Uniform choice over all 81 rules; optional private seed."""

    seed: Optional[int] = None


AgentPolicy = Union[SeuAgent, MaxminAgent, EllsbergType, UniformRandom]


def describe_policy(policy: AgentPolicy) -> str:
    if isinstance(policy, SeuAgent):
        pts = ", ".join(f"{o}:{w}" for o, w in policy.prior.support)
        return f"seu({pts})"
    if isinstance(policy, MaxminAgent):
        return f"maxmin([{policy.lo}, {policy.hi}])"
    if isinstance(policy, EllsbergType):
        return f"ellsberg({policy.a}WW{policy.d})"
    if isinstance(policy, UniformRandom):
        return f"uniform(seed={policy.seed})"
    raise TypeError(f"unknown policy {policy!r}")


def _optimal_rule_deterministic(policy: AgentPolicy, cfg: ExperimentConfig) -> DecisionRule:
    if isinstance(policy, SeuAgent):
        optima = optimal_rules(SEU(policy.prior), cfg)
    else:
        optima = optimal_rules(MaxminEU(policy.lo, policy.hi), cfg)
    # ties break to the first rule in enumeration order
    return min(optima, key=rule_index)


def simulate_outcomes(
    rule: DecisionRule,
    omega,
    n: int,
    rng: random.Random,
    cfg: ExperimentConfig = DEFAULT_CONFIG,
) -> int:
    """Run the full protocol n times for one rule; returns the win count.

    Each run: two informational draws pick the executed bet, then one
    ambiguous and one risky betting draw settle it.
    """
    w = float(as_omega(omega))
    white = float(cfg.white_prob)
    wins = 0
    for _ in range(n):
        first = "G" if rng.random() < w else "Y"
        second = "G" if rng.random() < w else "Y"
        bet = rule.bet_for(DrawOutcome(first + second))
        ambiguous = "G" if rng.random() < w else "Y"
        risky = "W" if rng.random() < white else "R"
        if resolve_bet(rule, DrawOutcome(first + second), (ambiguous, risky), cfg).won:
            wins += 1
    return wins


@dataclass(frozen=True)
class PolicyOutcome:
    policy: str
    count: int
    wins: int

    @property
    def win_rate(self) -> float:
        return self.wins / self.count if self.count else 0.0


@dataclass(frozen=True)
class PopulationSummary:
    true_omega: Fraction
    seed: int
    outcomes: tuple[PolicyOutcome, ...]

    @property
    def total(self) -> int:
        return sum(o.count for o in self.outcomes)

    @property
    def total_wins(self) -> int:
        return sum(o.wins for o in self.outcomes)


def simulate_population(
    policies: Sequence[tuple[AgentPolicy, int]],
    true_omega,
    seed: int,
    cfg: ExperimentConfig = DEFAULT_CONFIG,
) -> tuple[ChoiceDataset, PopulationSummary]:
    """Simulate a population of agents through independent protocol runs.

    Every simulated subject gets their own informational draws (unlike a
    live session, where one monitor draws for everyone): that is what lets
    win frequencies converge to the act value at the true composition.
    Rule choice per policy: optimizing agents pick their model's optimum
    with deterministic tie-breaking; uniform agents draw from their own
    seeded stream when one is given, else from the master stream.
    """
    omega = as_omega(true_omega)
    w = float(omega)
    white = float(cfg.white_prob)
    master = random.Random(seed)
    records: list[ChoiceRecord] = []
    outcomes: list[PolicyOutcome] = []
    subject_no = 0
    rules = enumerate_rules()
    for policy, count in policies:
        if count < 0:
            raise ValueError("policy counts must be nonnegative")
        private = (
            random.Random(policy.seed)
            if isinstance(policy, UniformRandom) and policy.seed is not None
            else None
        )
        fixed_rule: Optional[DecisionRule] = None
        if isinstance(policy, (SeuAgent, MaxminAgent)):
            fixed_rule = _optimal_rule_deterministic(policy, cfg)
        elif isinstance(policy, EllsbergType):
            fixed_rule = policy.rule
        wins = 0
        for _ in range(count):
            subject_no += 1
            if fixed_rule is not None:
                rule = fixed_rule
            else:
                stream = private if private is not None else master
                rule = rules[stream.randrange(len(rules))]
            first = "G" if master.random() < w else "Y"
            second = "G" if master.random() < w else "Y"
            info = DrawOutcome(first + second)
            ambiguous = "G" if master.random() < w else "Y"
            risky = "W" if master.random() < white else "R"
            if resolve_bet(rule, info, (ambiguous, risky), cfg).won:
                wins += 1
            records.append(ChoiceRecord(subject_id=f"sim-{subject_no:05d}", rule=rule))
        outcomes.append(PolicyOutcome(policy=describe_policy(policy), count=count, wins=wins))
    dataset = ChoiceDataset(records=tuple(records))
    summary = PopulationSummary(true_omega=omega, seed=seed, outcomes=tuple(outcomes))
    return dataset, summary
