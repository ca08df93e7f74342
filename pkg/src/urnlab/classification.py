"""Dominance and Bayesian classification of decision rules.

A rule delta' dominates delta when its winning probability is at least as
high in every state and strictly higher everywhere except possibly at the
degenerate compositions omega in {0, 1}.  The decision reduces to the sign
of a cubic with rational coefficients, which is settled exactly by root
counting, never by sampling.

The three classes partition the 81 rules:

* Bayesian (S): optimal under some nondegenerate belief about the urn.
* Dominated (D): some other rule wins more often in every state.
* Undominated non-Bayesian (N\\S): everything else.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from . import ratpoly
from .core import (
    DEFAULT_CONFIG,
    DRAW_OUTCOMES,
    ActPolynomial,
    Bet,
    DecisionRule,
    DrawOutcome,
    ExperimentConfig,
    all_acts,
    enumerate_rules,
    induced_act,
)

TwoPointPrior = tuple[tuple[Fraction, Fraction], ...]


class RuleClass(Enum):
    BAYESIAN = "S"
    UNDOMINATED_NON_BAYESIAN = "N\\S"
    DOMINATED = "D"

    @property
    def label(self) -> str:
        return self.value


@dataclass(frozen=True)
class RootAnalysis:
    """Where the difference polynomial vanishes on [0, 1], and its sign elsewhere.

    ``roots`` are isolating intervals (lo == hi for exact rational roots);
    ``gaps`` are the maximal root-free open intervals in between, with
    ``gap_signs`` the constant sign of the polynomial on each gap.
    """

    roots: tuple[tuple[Fraction, Fraction], ...]
    gaps: tuple[tuple[Fraction, Fraction], ...]
    gap_signs: tuple[int, ...]


@dataclass(frozen=True)
class DominanceCertificate:
    dominating_rule: DecisionRule
    dominated_rule: DecisionRule
    difference: ActPolynomial
    root_analysis: RootAnalysis
    construction: Optional[str] = None  # W-pair replacement tag when applicable


def improvement_delta(
    delta_prime: DecisionRule,
    delta: DecisionRule,
    cfg: ExperimentConfig = DEFAULT_CONFIG,
) -> ActPolynomial:
    """Difference of induced acts: win probability gained by delta_prime over delta."""
    return induced_act(delta_prime, cfg) - induced_act(delta, cfg)


def analyze_on_unit(act: ActPolynomial) -> RootAnalysis:
    """Exact root/sign structure of an act polynomial on [0, 1]."""
    p = act.poly
    if ratpoly.is_zero(p):
        return RootAnalysis(roots=(), gaps=((Fraction(0), Fraction(1)),), gap_signs=(0,))
    roots = tuple(ratpoly.isolate_roots(p, 0, 1))
    cuts: list[Fraction] = [Fraction(0)]
    for lo, hi in roots:
        cuts.extend((lo, hi))
    cuts.append(Fraction(1))
    root_intervals = {(lo, hi) for lo, hi in roots if lo != hi}
    gaps = []
    signs = []
    for u, v in zip(cuts, cuts[1:]):
        if u >= v or (u, v) in root_intervals:
            continue
        val = ratpoly.evaluate(p, (u + v) / 2)
        gaps.append((u, v))
        signs.append(0 if val == 0 else (1 if val > 0 else -1))
    return RootAnalysis(roots=roots, gaps=tuple(gaps), gap_signs=tuple(signs))


def dominates(
    delta_prime: DecisionRule,
    delta: DecisionRule,
    cfg: ExperimentConfig = DEFAULT_CONFIG,
) -> bool:
    """Exact dominance test: delta' weakly better on [0,1], strictly on (0,1).

    The difference polynomial must be nonnegative at both endpoints and
    have no root in the open unit interval while being positive at its
    midpoint; continuity then forces strict positivity throughout (0, 1).
    """
    diff = improvement_delta(delta_prime, delta, cfg)
    p = diff.poly
    if ratpoly.is_zero(p):
        return False
    half = ratpoly.evaluate(p, Fraction(1, 2))
    if half <= 0:
        return False
    if ratpoly.evaluate(p, 0) < 0 or ratpoly.evaluate(p, 1) < 0:
        return False
    return ratpoly.count_roots_open(p, 0, 1) == 0


def dominance_certificate(
    delta_prime: DecisionRule,
    delta: DecisionRule,
    cfg: ExperimentConfig = DEFAULT_CONFIG,
    construction: Optional[str] = None,
) -> Optional[DominanceCertificate]:
    """Certificate for a dominance claim, or None when it does not hold."""
    if not dominates(delta_prime, delta, cfg):
        return None
    diff = improvement_delta(delta_prime, delta, cfg)
    return DominanceCertificate(
        dominating_rule=delta_prime,
        dominated_rule=delta,
        difference=diff,
        root_analysis=analyze_on_unit(diff),
        construction=construction,
    )


# W-pair replacements, tried in this order.  Each rewrites two W entries of
# a rule into an ambiguous-bet pair that wins strictly more often between
# the degenerate compositions, whatever the remaining entries are.
_W_PAIR_REPLACEMENTS: tuple[tuple[str, dict[DrawOutcome, Bet]], ...] = (
    ("GG+GY", {DrawOutcome.GG: Bet.GREEN, DrawOutcome.GY: Bet.YELLOW}),
    ("GG+YG", {DrawOutcome.GG: Bet.GREEN, DrawOutcome.YG: Bet.YELLOW}),
    ("YY+YG", {DrawOutcome.YY: Bet.YELLOW, DrawOutcome.YG: Bet.GREEN}),
    ("YY+GY", {DrawOutcome.YY: Bet.YELLOW, DrawOutcome.GY: Bet.GREEN}),
    ("GY+YG", {DrawOutcome.GY: Bet.GREEN, DrawOutcome.YG: Bet.YELLOW}),
    ("GG+YY", {DrawOutcome.GG: Bet.GREEN, DrawOutcome.YY: Bet.YELLOW}),
)


def w_pair_replacement(rule: DecisionRule) -> Optional[tuple[str, DecisionRule]]:
    """Canonical improving rewrite for a rule betting White twice or more.

    Returns (tag, improved rule) where the tag names the two draw outcomes
    whose W bets were replaced; None when fewer than two entries are W.
    """
    if rule.white_count < 2:
        return None
    for tag, replacement in _W_PAIR_REPLACEMENTS:
        if all(rule.bet_for(o) is Bet.WHITE for o in replacement):
            bets = tuple(
                replacement.get(o, rule.bet_for(o)) for o in DRAW_OUTCOMES
            )
            return tag, DecisionRule(bets)
    return None


@lru_cache(maxsize=4)
def _scan_first_dominators(
    cfg: ExperimentConfig,
) -> dict[DecisionRule, Optional[DecisionRule]]:
    """For each rule, the first rule (in enumeration order) that dominates it."""
    rules = enumerate_rules()
    out: dict[DecisionRule, Optional[DecisionRule]] = {}
    for delta in rules:
        out[delta] = next(
            (dp for dp in rules if dp != delta and dominates(dp, delta, cfg)), None
        )
    return out


def dominated_set(cfg: ExperimentConfig = DEFAULT_CONFIG) -> frozenset[DecisionRule]:
    """Rules dominated by some other rule, from the full pairwise scan."""
    return frozenset(
        delta for delta, dp in _scan_first_dominators(cfg).items() if dp is not None
    )


@lru_cache(maxsize=4)
def full_dominance_relation(
    cfg: ExperimentConfig = DEFAULT_CONFIG,
) -> frozenset[tuple[DecisionRule, DecisionRule]]:
    """All ordered pairs (delta', delta) with delta' dominating delta."""
    rules = enumerate_rules()
    return frozenset(
        (dp, d) for dp in rules for d in rules if dp != d and dominates(dp, d, cfg)
    )


def undominated_set(cfg: ExperimentConfig = DEFAULT_CONFIG) -> frozenset[DecisionRule]:
    return frozenset(enumerate_rules()) - dominated_set(cfg)


def certificate_for(
    delta: DecisionRule, cfg: ExperimentConfig = DEFAULT_CONFIG
) -> Optional[DominanceCertificate]:
    """Dominance certificate for a dominated rule, None if undominated.

    Rules with two or more W entries get the canonical W-pair replacement
    as the dominating rule; other dominated rules fall back to the first
    dominator found in enumeration order.
    """
    rewrite = w_pair_replacement(delta)
    if rewrite is not None:
        tag, improved = rewrite
        cert = dominance_certificate(improved, delta, cfg, construction=tag)
        if cert is not None:
            return cert
    dominator = _scan_first_dominators(cfg)[delta]
    if dominator is None:
        return None
    return dominance_certificate(dominator, delta, cfg)


_Y_COUNTS = {
    DrawOutcome.GG: 0,
    DrawOutcome.GY: 1,
    DrawOutcome.YG: 1,
    DrawOutcome.YY: 2,
}


def is_bayesian(rule: DecisionRule) -> bool:
    """Structural test for optimality under some nondegenerate belief.

    A rule qualifies iff it never bets White and, whenever it bets Yellow
    after some informational draw, it also bets Yellow after every draw
    containing strictly more Yellows.  (Nondegenerate means any belief
    except certainty that the urn is all-Yellow or all-Green.)
    """
    if Bet.WHITE in rule.bets:
        return False
    for o1, o2 in itertools.permutations(DRAW_OUTCOMES, 2):
        if (
            _Y_COUNTS[o2] > _Y_COUNTS[o1]
            and rule.bet_for(o1) is Bet.YELLOW
            and rule.bet_for(o2) is not Bet.YELLOW
        ):
            return False
    return True


@lru_cache(maxsize=1)
def bayesian_set() -> frozenset[DecisionRule]:
    return frozenset(r for r in enumerate_rules() if is_bayesian(r))


@lru_cache(maxsize=1)
def _certificate_family() -> tuple[TwoPointPrior, ...]:
    """Declared search family: two-point priors on a tenths grid.

    Symmetric pairs {t, 1-t} with equal weights come first (they certify
    the rules that split their middle bets), then a skew grid.
    """
    tenths = [Fraction(k, 10) for k in range(1, 10)]
    weights = [Fraction(1, 2), Fraction(1, 5), Fraction(2, 5), Fraction(3, 5), Fraction(4, 5)]
    family: list[TwoPointPrior] = []
    for t in tenths:
        if t < Fraction(1, 2):
            family.append(((t, Fraction(1, 2)), (1 - t, Fraction(1, 2))))
    for lo in tenths:
        for hi in tenths:
            if lo < hi:
                for w in weights:
                    family.append(((lo, w), (hi, 1 - w)))
    return tuple(family)


@lru_cache(maxsize=None)
def _family_optima(index: int) -> frozenset[DecisionRule]:
    prior = _certificate_family()[index]
    acts = all_acts()
    values = {
        rule: sum((w * acts[rule](omega) for omega, w in prior), Fraction(0))
        for rule in enumerate_rules()
    }
    best = max(values.values())
    return frozenset(rule for rule, v in values.items() if v == best)


def bayesian_certificate(rule: DecisionRule) -> Optional[TwoPointPrior]:
    """A two-point belief under which the rule is (weakly) optimal among all 81.

    Search runs over the declared family only; a hit is a soundness
    witness for ``is_bayesian``, a miss for a rule outside the Bayesian
    set is expected.  Deterministic: first certifying prior wins.
    """
    for i in range(len(_certificate_family())):
        if rule in _family_optima(i):
            return _certificate_family()[i]
    return None


@lru_cache(maxsize=1)
def knife_edge_ties() -> frozenset[DecisionRule]:
    """Rules weakly optimal under the fifty-fifty point belief.

    Under a point mass at omega = 1/2 every no-White rule wins with
    probability exactly 1/2, so all sixteen tie.  The Bayesian set uses
    the structural characterization instead, which breaks this knife-edge
    tie; the tie set is exposed here for transparency.
    """
    acts = all_acts()
    half = Fraction(1, 2)
    values = {rule: acts[rule](half) for rule in enumerate_rules()}
    best = max(values.values())
    return frozenset(rule for rule, v in values.items() if v == best)


def classify(
    delta: DecisionRule, cfg: ExperimentConfig = DEFAULT_CONFIG
) -> RuleClass:
    """Dominated beats Bayesian beats the residual class, per the partition."""
    if delta in dominated_set(cfg):
        return RuleClass.DOMINATED
    if is_bayesian(delta):
        return RuleClass.BAYESIAN
    return RuleClass.UNDOMINATED_NON_BAYESIAN


def classification_report(
    cfg: ExperimentConfig = DEFAULT_CONFIG,
) -> list[tuple[DecisionRule, RuleClass, Optional[DecisionRule]]]:
    """(rule, class, dominating rule or None) for all rules, enumeration order."""
    out = []
    for rule in enumerate_rules():
        cls = classify(rule, cfg)
        dominator = None
        if cls is RuleClass.DOMINATED:
            cert = certificate_for(rule, cfg)
            dominator = cert.dominating_rule if cert else None
        out.append((rule, cls, dominator))
    return out
