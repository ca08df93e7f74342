"""Evaluation of decision rules under classical ambiguity preferences.

Three families are implemented: subjective expected utility against a
finite-support belief, maxmin expected utility over all beliefs on an
interval of urn compositions, and a smooth-ambiguity aggregator with a
negative-exponential transform.  Each family is monotone: a rule that
wins less often in every state is never selected, which the audit here
verifies instance by instance.

Values are exact rationals wherever the inputs allow; maxmin minima at
irrational critical points are bracketed to width 1e-18, far below the
declared 1e-9 tie tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from . import ratpoly
from .classification import DominanceCertificate, certificate_for, dominated_set
from .core import (
    DEFAULT_CONFIG,
    DecisionRule,
    ExperimentConfig,
    all_acts,
    as_omega,
    enumerate_rules,
    induced_act,
)

# Ties between irrational-valued candidates are called within this window;
# comparisons stay exact whenever every candidate value is rational.
TIE_EPS = Fraction(1, 10**9)


class DegeneratePriorError(ValueError):
    """The belief gives the open interval of compositions no weight at all."""


@dataclass(frozen=True)
class Prior:
    """Finite-support belief over the Green-ball frequency.

    Weights are positive and sum to one.  Some interior composition must
    carry weight: beliefs concentrated entirely on the degenerate urns
    (all-Yellow, all-Green) make every informational draw either certain
    or impossible and are excluded, point masses at the endpoints in
    particular.
    """

    support: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pairs = tuple(
            (as_omega(omega), Fraction(weight)) for omega, weight in self.support
        )
        object.__setattr__(self, "support", pairs)
        if not pairs:
            raise DegeneratePriorError("prior needs at least one support point")
        if any(w <= 0 for _, w in pairs):
            raise DegeneratePriorError("prior weights must be positive")
        if sum(w for _, w in pairs) != 1:
            raise DegeneratePriorError("prior weights must sum to 1")
        omegas = [o for o, _ in pairs]
        if len(set(omegas)) != len(omegas):
            raise DegeneratePriorError("prior support points must be distinct")
        if all(o in (0, 1) for o in omegas):
            raise DegeneratePriorError(
                "prior must put positive weight on some interior composition"
            )

    @classmethod
    def point_mass(cls, omega) -> "Prior":
        return cls(((Fraction(omega), Fraction(1)),))

    @classmethod
    def two_point(cls, omega_a, omega_b, weight_a=Fraction(1, 2)) -> "Prior":
        wa = Fraction(weight_a)
        return cls(((Fraction(omega_a), wa), (Fraction(omega_b), 1 - wa)))

    def is_symmetric(self) -> bool:
        """Invariant under swapping Green and Yellow (omega -> 1 - omega)."""
        return dict(self.support) == {1 - o: w for o, w in self.support}


@dataclass(frozen=True)
class SEU:
    prior: Prior


@dataclass(frozen=True)
class MaxminEU:
    """Worst case over all beliefs supported on [lo, hi].

    Expected winning probability is linear in the belief, so the worst
    case over mixtures is attained at a point mass; evaluation reduces to
    minimizing the act polynomial over the interval.  The degenerate
    intervals [0,0] and [1,1] are point beliefs in an impossible urn and
    are rejected, mirroring the prior nondegeneracy rule.
    """

    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(1)

    def __post_init__(self):
        lo, hi = as_omega(self.lo), as_omega(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo > hi:
            raise ValueError(f"empty prior interval [{lo}, {hi}]")
        if lo == hi and lo in (0, 1):
            raise DegeneratePriorError(
                "prior interval collapsed onto a degenerate composition"
            )


@dataclass(frozen=True)
class SmoothAmbiguity:
    """Second-order belief over compositions with curvature theta > 0.

    Aggregates phi(expected win prob) across the second-order support
    with phi(x) = -exp(-x/theta), then inverts phi; small theta means
    strong ambiguity aversion, large theta approaches the plain mean.
    """

    second_order_prior: Prior
    theta: float

    def __post_init__(self):
        if not self.theta > 0:
            raise ValueError("curvature theta must be positive")


PreferenceModel = Union[SEU, MaxminEU, SmoothAmbiguity]


@dataclass(frozen=True)
class MaxminResult:
    value: Fraction
    argmin: Fraction
    exact: bool


def seu_value(
    prior: Prior, delta: DecisionRule, cfg: ExperimentConfig = DEFAULT_CONFIG
) -> Fraction:
    """Expected winning probability of the rule under the belief. Exact."""
    act = induced_act(delta, cfg)
    return sum((w * act(omega) for omega, w in prior.support), Fraction(0))


def maxmin_value(
    model: MaxminEU, delta: DecisionRule, cfg: ExperimentConfig = DEFAULT_CONFIG
) -> MaxminResult:
    """Worst-case winning probability over the model's interval.

    Minimizes the act exactly over interval endpoints and the real
    critical points of its derivative inside the interval.
    """
    act = induced_act(delta, cfg)
    value, argmin, exact = ratpoly.min_on_interval(act.poly, model.lo, model.hi)
    return MaxminResult(value=value, argmin=argmin, exact=exact)


def smooth_value(
    model: SmoothAmbiguity, delta: DecisionRule, cfg: ExperimentConfig = DEFAULT_CONFIG
) -> float:
    """Certainty equivalent under the negative-exponential aggregator."""
    theta = float(model.theta)
    acc = 0.0
    act = induced_act(delta, cfg)
    for omega, weight in model.second_order_prior.support:
        inner = float(act(omega))
        acc += float(weight) * math.exp(-inner / theta)
    return -theta * math.log(acc)


def model_value(
    model: PreferenceModel, delta: DecisionRule, cfg: ExperimentConfig = DEFAULT_CONFIG
) -> Union[Fraction, float]:
    if isinstance(model, SEU):
        return seu_value(model.prior, delta, cfg)
    if isinstance(model, MaxminEU):
        return maxmin_value(model, delta, cfg).value
    if isinstance(model, SmoothAmbiguity):
        return smooth_value(model, delta, cfg)
    raise TypeError(f"unknown preference model {model!r}")


def optimal_rules(
    model: PreferenceModel, cfg: ExperimentConfig = DEFAULT_CONFIG
) -> frozenset[DecisionRule]:
    """All maximizers of the model's value over the 81 rules, ties included.

    Rational values compare exactly; maxmin and smooth values may be
    irrational, so candidates within TIE_EPS of the maximum count as tied.
    """
    rules = enumerate_rules()
    if isinstance(model, SEU):
        acts = all_acts(cfg)
        values = {
            r: sum((w * acts[r](o) for o, w in model.prior.support), Fraction(0))
            for r in rules
        }
        best = max(values.values())
        return frozenset(r for r, v in values.items() if v == best)
    if isinstance(model, MaxminEU):
        values_mm = {r: maxmin_value(model, r, cfg).value for r in rules}
        best_mm = max(values_mm.values())
        return frozenset(r for r, v in values_mm.items() if v >= best_mm - TIE_EPS)
    if isinstance(model, SmoothAmbiguity):
        values_sm = {r: smooth_value(model, r, cfg) for r in rules}
        best_sm = max(values_sm.values())
        eps = float(TIE_EPS)
        return frozenset(r for r, v in values_sm.items() if v >= best_sm - eps)
    raise TypeError(f"unknown preference model {model!r}")


def describe_model(model: PreferenceModel) -> str:
    if isinstance(model, SEU):
        pts = ", ".join(f"{o}:{w}" for o, w in model.prior.support)
        return f"SEU({pts})"
    if isinstance(model, MaxminEU):
        return f"MaxminEU([{model.lo}, {model.hi}])"
    if isinstance(model, SmoothAmbiguity):
        pts = ", ".join(f"{o}:{w}" for o, w in model.second_order_prior.support)
        return f"SmoothAmbiguity({pts}; theta={model.theta})"
    return repr(model)


@dataclass(frozen=True)
class MonotonicityReport:
    model: str
    passed: bool
    optimal: frozenset[DecisionRule]
    violations: tuple[tuple[DecisionRule, Optional[DominanceCertificate]], ...]


def monotonicity_audit(
    model: PreferenceModel, cfg: ExperimentConfig = DEFAULT_CONFIG
) -> MonotonicityReport:
    """Check that the model never selects a dominated rule.

    Any dominated rule in the optimum set is reported together with its
    dominance certificate.
    """
    optimal = optimal_rules(model, cfg)
    bad = sorted(optimal & dominated_set(cfg))
    return MonotonicityReport(
        model=describe_model(model),
        passed=not bad,
        optimal=optimal,
        violations=tuple((r, certificate_for(r, cfg)) for r in bad),
    )
