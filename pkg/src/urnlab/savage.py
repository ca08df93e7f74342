"""Fully state-resolved representation: 16 states, acts, and derived preference.

A state spells out every ball drawn: three ambiguous-urn draws (the two
informational draws plus the betting draw) and the risky-urn draw.  Acts
map states to win/lose.  Two axioms encode what a participant was told:

* risky-urn information: moving the prize from a White-risky state to the
  matching Red-risky state (all else equal) is a strict improvement, since
  Red is known to be the more likely color;
* exchangeability: the three ambiguous draws of a state are independent
  with replacement, so two states whose ambiguous coordinates are
  rearrangements of each other are interchangeable.  The indifference this
  generates is outcome exchange between such states: moving the prize from
  a state to any rearrangement of it (risky draw unchanged) never matters.
  Relabeling a whole act by a coordinate permutation is the special case
  where every state trades places with its image at once.

``derive_preference`` computes exactly the preferences forced by these two
axioms plus transitivity, answering Incomparable whenever they are silent.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Optional

from enum import Enum

from .core import (
    DEFAULT_CONFIG,
    Bet,
    DecisionRule,
    DrawOutcome,
    ExperimentConfig,
    OmegaLike,
    as_omega,
)


class SearchBudgetExceeded(RuntimeError):
    """Reachability search visited more acts than the configured budget."""


class SavageState(NamedTuple):
    """Ball colors (s1, s2, s3, s0): three ambiguous draws, one risky draw."""

    s1: str  # G or Y
    s2: str  # G or Y
    s3: str  # G or Y
    s0: str  # R or W


AMBIGUOUS_COLORS = ("G", "Y")
RISKY_COLORS = ("R", "W")

ALL_STATES: tuple[SavageState, ...] = tuple(
    SavageState(s1, s2, s3, s0)
    for s1 in AMBIGUOUS_COLORS
    for s2 in AMBIGUOUS_COLORS
    for s3 in AMBIGUOUS_COLORS
    for s0 in RISKY_COLORS
)

_STATE_INDEX = {s: i for i, s in enumerate(ALL_STATES)}

# Triples (s1, s2, s3); each pairs a White-risky and a Red-risky state.
ALL_TRIPLES: tuple[tuple[str, str, str], ...] = tuple(
    (s1, s2, s3)
    for s1 in AMBIGUOUS_COLORS
    for s2 in AMBIGUOUS_COLORS
    for s3 in AMBIGUOUS_COLORS
)

Permutation3 = tuple[int, int, int]  # images (pi(1), pi(2), pi(3)), 1-based

ALL_PERMUTATIONS: tuple[Permutation3, ...] = tuple(itertools.permutations((1, 2, 3)))

IDENTITY: Permutation3 = (1, 2, 3)


@dataclass(frozen=True)
class SavageAct:
    """Win/lose indicator over the 16 states, packed into a bit mask."""

    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < 1 << len(ALL_STATES):
            raise ValueError(f"act mask out of range: {self.mask}")

    @classmethod
    def from_winning_states(cls, states: Iterable[SavageState]) -> "SavageAct":
        mask = 0
        for s in states:
            mask |= 1 << _STATE_INDEX[s]
        return cls(mask)

    def __call__(self, state: SavageState) -> int:
        return (self.mask >> _STATE_INDEX[state]) & 1

    @property
    def winning_states(self) -> tuple[SavageState, ...]:
        return tuple(s for s in ALL_STATES if self(s))

    def prize_on_risky_color(self, color: str) -> int:
        return sum(1 for s in self.winning_states if s.s0 == color)

    def __repr__(self) -> str:
        wins = ",".join("".join(s) for s in self.winning_states)
        return f"SavageAct[{wins}]"


def _bet_wins(bet: Bet, s3: str, s0: str) -> bool:
    if bet is Bet.WHITE:
        return s0 == "W"
    if bet is Bet.GREEN:
        return s3 == "G"
    return s3 == "Y"


def rule_to_savage_act(delta: DecisionRule) -> SavageAct:
    """Act induced by a rule: the bet keyed by (s1, s2) wins or loses at (s3, s0)."""
    winning = []
    for s in ALL_STATES:
        outcome = DrawOutcome(s.s1 + s.s2)
        if _bet_wins(delta.bet_for(outcome), s.s3, s.s0):
            winning.append(s)
    return SavageAct.from_winning_states(winning)


def conditional_bet_act(bet: Bet, s1: str, s2: str) -> SavageAct:
    """Act of a single bet placed only when the informational draws are (s1, s2).

    Embeds a plain one-shot urn choice into the state space: the act pays
    nothing whenever the informational draws differ.
    """
    winning = [
        s
        for s in ALL_STATES
        if (s.s1, s.s2) == (s1, s2) and _bet_wins(bet, s.s3, s.s0)
    ]
    return SavageAct.from_winning_states(winning)


def permute_state(state: SavageState, pi: Permutation3) -> SavageState:
    amb = (state.s1, state.s2, state.s3)
    return SavageState(amb[pi[0] - 1], amb[pi[1] - 1], amb[pi[2] - 1], state.s0)


def permute_act(act: SavageAct, pi: Permutation3) -> SavageAct:
    """g with g(s) = act(s^pi): relabels the three ambiguous draw coordinates."""
    return SavageAct.from_winning_states(
        s for s in ALL_STATES if act(permute_state(s, pi))
    )


def exchangeable(f: SavageAct, g: SavageAct) -> bool:
    """True when some permutation of ambiguous coordinates maps f onto g."""
    return any(permute_act(f, pi) == g for pi in ALL_PERMUTATIONS)


def states_exchange_equivalent(s: SavageState, t: SavageState) -> bool:
    """Same risky draw and the ambiguous draws are rearrangements of each other."""
    return s.s0 == t.s0 and sorted((s.s1, s.s2, s.s3)) == sorted((t.s1, t.s2, t.s3))


def outcome_exchange(
    act: SavageAct, pairs: Iterable[tuple[SavageState, SavageState]]
) -> SavageAct:
    """Swap outcomes across disjoint pairs of exchange-equivalent states.

    Each pair must consist of distinct states that are rearrangements of
    each other with the same risky draw; the resulting act is indifferent
    to the original for any exchangeable preference.
    """
    mask = act.mask
    seen: set[SavageState] = set()
    for s, t in pairs:
        if s == t or not states_exchange_equivalent(s, t):
            raise ValueError(f"states {s} and {t} are not exchange-equivalent")
        if s in seen or t in seen:
            raise ValueError("exchange pairs must be disjoint")
        seen.update((s, t))
        bit_s = (mask >> _STATE_INDEX[s]) & 1
        bit_t = (mask >> _STATE_INDEX[t]) & 1
        if bit_s != bit_t:
            mask ^= (1 << _STATE_INDEX[s]) | (1 << _STATE_INDEX[t])
    return SavageAct(mask)


def risky_improvement_step(f: SavageAct, g: SavageAct) -> bool:
    """True iff g moves the prize from White- to Red-risky states, one or more
    disjoint triples at a time, leaving everything else unchanged.

    A swap at triple t requires f to win at (t, W) and lose at (t, R);
    g then wins at (t, R) and loses at (t, W).
    """
    swaps = 0
    for t in ALL_TRIPLES:
        sw = SavageState(*t, "W")
        sr = SavageState(*t, "R")
        before = (f(sw), f(sr))
        after = (g(sw), g(sr))
        if before == after:
            continue
        if before == (1, 0) and after == (0, 1):
            swaps += 1
        else:
            return False
    return swaps >= 1


def _improvement_swaps(act: SavageAct) -> list[SavageAct]:
    out = []
    for t in ALL_TRIPLES:
        iw = _STATE_INDEX[SavageState(*t, "W")]
        ir = _STATE_INDEX[SavageState(*t, "R")]
        if (act.mask >> iw) & 1 and not (act.mask >> ir) & 1:
            out.append(SavageAct(act.mask ^ (1 << iw) ^ (1 << ir)))
    return out


# Pairs of distinct exchange-equivalent states, precomputed once.
_EXCHANGE_PAIRS: tuple[tuple[int, int], ...] = tuple(
    (_STATE_INDEX[s], _STATE_INDEX[t])
    for i, s in enumerate(ALL_STATES)
    for t in ALL_STATES[i + 1 :]
    if states_exchange_equivalent(s, t)
)


def _exchange_swaps(act: SavageAct) -> list[SavageAct]:
    out = []
    for i, j in _EXCHANGE_PAIRS:
        if (act.mask >> i) & 1 != (act.mask >> j) & 1:
            out.append(SavageAct(act.mask ^ (1 << i) ^ (1 << j)))
    return out


class Preference(Enum):
    STRICTLY_BETTER = "strictly-better"  # second act strictly preferred to first
    INDIFFERENT = "indifferent"
    INCOMPARABLE = "incomparable"


def derive_preference(
    f: SavageAct, g: SavageAct, budget: int = 10**6
) -> Preference:
    """Relation between f and g forced by the two axioms plus transitivity.

    Breadth-first reachability from f, where exchange steps preserve
    indifference and improvement steps are strict: reaching g through at
    least one improvement step yields STRICTLY_BETTER (g over f); reaching
    it through exchange steps alone yields INDIFFERENT.  When no path
    exists the axioms are silent and the answer is INCOMPARABLE.

    The two answers cannot collide: exchange steps preserve the number of
    Red-risky winning states while improvement steps strictly increase it,
    which also bounds path length so the search always terminates.
    ``budget`` caps visited (act, strictness) pairs and guards generalized
    configurations.
    """
    start = (f, False)
    visited: set[tuple[SavageAct, bool]] = {start}
    queue: deque[tuple[SavageAct, bool]] = deque([start])
    answer = None
    while queue:
        current, strict = queue.popleft()
        if current == g:
            # the R-prize count invariant makes the other flag unreachable,
            # so the first encounter settles the relation
            answer = strict
            break
        neighbors = [(n, strict) for n in _exchange_swaps(current)]
        neighbors += [(n, True) for n in _improvement_swaps(current)]
        for node in neighbors:
            if node not in visited:
                visited.add(node)
                queue.append(node)
                if len(visited) > budget:
                    raise SearchBudgetExceeded(
                        f"visited more than {budget} act states while "
                        f"comparing {f!r} and {g!r}"
                    )
    if answer is None:
        return Preference.INCOMPARABLE
    return Preference.STRICTLY_BETTER if answer else Preference.INDIFFERENT


def savage_consistency(
    delta: DecisionRule,
    omega: OmegaLike,
    cfg: ExperimentConfig = DEFAULT_CONFIG,
) -> Fraction:
    """Expected win indicator over the 16 states with independent coordinates.

    Must equal the induced-act polynomial at omega exactly; the identity is
    the cross-representation consistency check between the two state-space
    encodings.
    """
    w = as_omega(omega)
    cfg.require_two_draws()
    act = rule_to_savage_act(delta)
    white = cfg.white_prob
    total = Fraction(0)
    for s in ALL_STATES:
        if not act(s):
            continue
        prob = Fraction(1)
        for color in (s.s1, s.s2, s.s3):
            prob *= w if color == "G" else 1 - w
        prob *= white if s.s0 == "W" else 1 - white
        total += prob
    return total
