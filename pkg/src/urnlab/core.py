"""Core model: urns, bets, informational draws, decision rules, and acts.

The setting is a two-urn betting experiment.  A risky urn has a known
composition (49 White / 51 Red by default); an ambiguous urn holds 100
balls, each Green or Yellow, in unknown proportion.  Before betting, two
informational draws (with replacement) from the ambiguous urn are shown.
A decision rule commits to one bet per possible informational-draw pair.

With ``omega`` the unknown frequency of Green balls, each rule induces an
act: a polynomial in omega giving the rule's probability of winning the
prize.  All coefficients are exact rationals; downstream dominance and
classification decisions depend on exact signs, so no floating point is
used anywhere in this module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

from . import ratpoly

OmegaLike = Union[Fraction, int, float, str]


class DomainError(ValueError):
    """A state or probability argument fell outside its legal range."""


class ConfigError(ValueError):
    """Experiment configuration violates a structural requirement."""


class Bet(Enum):
    GREEN = "G"
    YELLOW = "Y"
    WHITE = "W"

    def __str__(self) -> str:
        return self.value


# Enumeration order per position: G < Y < W.
BET_ORDER = (Bet.GREEN, Bet.YELLOW, Bet.WHITE)

_BET_FROM_CHAR = {b.value: b for b in Bet}
_COLOR_SWAP = {Bet.GREEN: Bet.YELLOW, Bet.YELLOW: Bet.GREEN, Bet.WHITE: Bet.WHITE}


class DrawOutcome(Enum):
    """Ordered pair of informational-draw colors; draw order is significant."""

    GG = "GG"
    GY = "GY"
    YG = "YG"
    YY = "YY"

    def __str__(self) -> str:
        return self.value


# Position order used throughout for 4-letter rule codes.
DRAW_OUTCOMES = (DrawOutcome.GG, DrawOutcome.GY, DrawOutcome.YG, DrawOutcome.YY)

_OUTCOME_INDEX = {o: i for i, o in enumerate(DRAW_OUTCOMES)}


@dataclass(frozen=True)
class ExperimentConfig:
    """Urn composition and payments.

    The 49/100 risky urn, $10 prize and $5 show-up fee are defaults, not
    constants, so simulations can vary them.  The two-draw design however
    is structural: operations reject any other ``info_draw_count``.
    """

    risky_white_count: int = 49
    risky_total: int = 100
    prize: Fraction = Fraction(10)
    show_up_fee: Fraction = Fraction(5)
    info_draw_count: int = 2

    def __post_init__(self):
        if not 0 < self.risky_white_count < self.risky_total:
            raise ConfigError(
                f"need 0 < risky_white_count < risky_total, "
                f"got {self.risky_white_count}/{self.risky_total}"
            )
        object.__setattr__(self, "prize", Fraction(self.prize))
        object.__setattr__(self, "show_up_fee", Fraction(self.show_up_fee))
        if self.prize <= 0:
            raise ConfigError("prize must be positive")

    @property
    def white_prob(self) -> Fraction:
        return Fraction(self.risky_white_count, self.risky_total)

    def require_two_draws(self) -> None:
        if self.info_draw_count != 2:
            raise ConfigError(
                f"operations support exactly 2 informational draws, "
                f"configured {self.info_draw_count}"
            )


DEFAULT_CONFIG = ExperimentConfig()


def as_omega(value: OmegaLike) -> Fraction:
    """Validate and convert a Green-ball frequency to an exact Fraction."""
    omega = Fraction(value)
    if not 0 <= omega <= 1:
        raise DomainError(f"omega must lie in [0, 1], got {value!r}")
    return omega


@dataclass(frozen=True)
class DecisionRule:
    """One bet per informational-draw outcome, in (GG, GY, YG, YY) order."""

    bets: tuple[Bet, Bet, Bet, Bet]

    def __post_init__(self):
        if len(self.bets) != 4 or not all(isinstance(b, Bet) for b in self.bets):
            raise ValueError(f"a decision rule needs exactly 4 bets, got {self.bets!r}")

    @classmethod
    def from_code(cls, code: str) -> "DecisionRule":
        code = code.strip().upper()
        if len(code) != 4 or any(ch not in _BET_FROM_CHAR for ch in code):
            raise ValueError(f"rule code must be 4 characters from G/Y/W, got {code!r}")
        return cls(tuple(_BET_FROM_CHAR[ch] for ch in code))

    @property
    def code(self) -> str:
        return "".join(b.value for b in self.bets)

    def bet_for(self, outcome: DrawOutcome) -> Bet:
        return self.bets[_OUTCOME_INDEX[outcome]]

    @property
    def white_count(self) -> int:
        return sum(1 for b in self.bets if b is Bet.WHITE)

    def color_swapped(self) -> "DecisionRule":
        """Swap Green and Yellow everywhere: bets and draw positions.

        Maps GG<->YY and GY<->YG while swapping G<->Y in each bet, so the
        swapped rule at state 1-omega wins exactly as often as the
        original at omega.
        """
        a, b, c, d = self.bets
        return DecisionRule(
            (_COLOR_SWAP[d], _COLOR_SWAP[c], _COLOR_SWAP[b], _COLOR_SWAP[a])
        )

    def __str__(self) -> str:
        return self.code

    def __repr__(self) -> str:
        return f"DecisionRule({self.code})"

    def __lt__(self, other: "DecisionRule") -> bool:
        # sort order = canonical enumeration order, not alphabetical codes
        return rule_index(self) < rule_index(other)


@lru_cache(maxsize=None)
def enumerate_rules() -> tuple[DecisionRule, ...]:
    """All 81 decision rules in lexicographic order (G < Y < W per position)."""
    return tuple(
        DecisionRule(bets) for bets in itertools.product(BET_ORDER, repeat=4)
    )


@lru_cache(maxsize=None)
def _rule_indices() -> dict[DecisionRule, int]:
    return {r: i for i, r in enumerate(enumerate_rules())}


def rule_index(rule: DecisionRule) -> int:
    """Position of a rule in the canonical enumeration."""
    return _rule_indices()[rule]


def bet_win_prob(bet: Bet, omega: OmegaLike, cfg: ExperimentConfig = DEFAULT_CONFIG) -> Fraction:
    """Probability that a single bet wins in state omega.

    White pays on the risky draw (composition known, state-independent);
    Green and Yellow pay on the ambiguous betting draw.
    """
    w = as_omega(omega)
    if bet is Bet.WHITE:
        return cfg.white_prob
    if bet is Bet.GREEN:
        return w
    return 1 - w


@dataclass(frozen=True)
class ActPolynomial:
    """Winning probability of a rule as a cubic in omega, exact rationals.

    Coefficients are (c0, c1, c2, c3) for c0 + c1*w + c2*w^2 + c3*w^3.
    """

    coefficients: tuple[Fraction, Fraction, Fraction, Fraction]

    @classmethod
    def from_coeffs(cls, coeffs) -> "ActPolynomial":
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > 4:
            raise ValueError(f"act polynomials have degree <= 3, got {len(cs) - 1}")
        cs += [Fraction(0)] * (4 - len(cs))
        return cls(tuple(cs))

    def __call__(self, omega: OmegaLike) -> Fraction:
        return ratpoly.evaluate(self.coefficients, Fraction(omega))

    def __sub__(self, other: "ActPolynomial") -> "ActPolynomial":
        return ActPolynomial(
            tuple(a - b for a, b in zip(self.coefficients, other.coefficients))
        )

    @property
    def poly(self) -> ratpoly.Coeffs:
        """Trimmed coefficient tuple for the polynomial toolkit."""
        return ratpoly.poly(self.coefficients)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def to_json(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coefficients]

    @classmethod
    def from_json(cls, data) -> "ActPolynomial":
        return cls.from_coeffs([Fraction(s) for s in data])


# Informational-draw weights as polynomials in omega: w^2, w(1-w), (1-w)w, (1-w)^2.
_OUTCOME_WEIGHT_POLYS = {
    DrawOutcome.GG: ratpoly.poly([0, 0, 1]),
    DrawOutcome.GY: ratpoly.poly([0, 1, -1]),
    DrawOutcome.YG: ratpoly.poly([0, 1, -1]),
    DrawOutcome.YY: ratpoly.poly([1, -2, 1]),
}


def _bet_prob_poly(bet: Bet, cfg: ExperimentConfig) -> ratpoly.Coeffs:
    if bet is Bet.WHITE:
        return ratpoly.poly([cfg.white_prob])
    if bet is Bet.GREEN:
        return ratpoly.poly([0, 1])
    return ratpoly.poly([1, -1])


@lru_cache(maxsize=None)
def induced_act(rule: DecisionRule, cfg: ExperimentConfig = DEFAULT_CONFIG) -> ActPolynomial:
    """Act induced by a rule: sum over draws of draw-weight times bet win prob.

    Construction is exact; every coefficient has denominator dividing the
    risky-urn total.
    """
    cfg.require_two_draws()
    acc: ratpoly.Coeffs = ratpoly.ZERO
    for outcome in DRAW_OUTCOMES:
        term = ratpoly.mul(
            _OUTCOME_WEIGHT_POLYS[outcome],
            _bet_prob_poly(rule.bet_for(outcome), cfg),
        )
        acc = ratpoly.add(acc, term)
    return ActPolynomial.from_coeffs(acc)


def evaluate_act(act: ActPolynomial, omega: OmegaLike) -> Fraction:
    """Exact winning probability of an act in state omega."""
    return act(as_omega(omega))


def all_acts(cfg: ExperimentConfig = DEFAULT_CONFIG) -> dict[DecisionRule, ActPolynomial]:
    """Acts for all 81 rules. Cached for the default configuration."""
    if cfg == DEFAULT_CONFIG:
        return _default_acts()
    return {rule: induced_act(rule, cfg) for rule in enumerate_rules()}


@lru_cache(maxsize=1)
def _default_acts() -> dict[DecisionRule, ActPolynomial]:
    return {rule: induced_act(rule) for rule in enumerate_rules()}


def omega_grid(n: int) -> Iterator[Fraction]:
    """n+1 evenly spaced exact rationals covering [0, 1]."""
    return (Fraction(k, n) for k in range(n + 1))
