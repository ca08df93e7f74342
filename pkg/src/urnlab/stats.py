"""Exact binomial inference and choice-dataset aggregation.

The confidence interval is the classical equal-tailed exact construction:
invert the binomial tail probabilities at each endpoint.  The regularized
incomplete beta function that expresses those tails is evaluated by a
continued-fraction expansion (1e-12 convergence) and inverted by bisection,
keeping the module dependency-free and bit-stable across platforms.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from enum import Enum
from typing import Iterable, Mapping, Optional, TextIO, Union

from .classification import RuleClass, classify
from .core import Bet, DecisionRule, DEFAULT_CONFIG, ExperimentConfig


class StatsError(ValueError):
    pass


def _ln_beta(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    max_iter = 300
    eps = 1e-12
    fpmin = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise StatsError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b), the regularized incomplete beta function."""
    if a <= 0 or b <= 0:
        raise StatsError("beta parameters must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = a * math.log(x) + b * math.log1p(-x) - _ln_beta(a, b)
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def binom_upper_tail(k: int, n: int, p: float) -> float:
    """P(X >= k) for X ~ Binomial(n, p), 1 <= k <= n."""
    return regularized_incomplete_beta(k, n - k + 1, p)


def binom_lower_tail(k: int, n: int, p: float) -> float:
    """P(X <= k) for X ~ Binomial(n, p), 0 <= k <= n - 1."""
    return regularized_incomplete_beta(n - k, k + 1, 1.0 - p)


def _bisect_probability(fn, target: float, increasing: bool, tol: float = 1e-12) -> float:
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if (fn(mid) < target) == increasing:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def clopper_pearson(k: int, n: int, conf: float) -> tuple[float, float]:
    """Exact equal-tailed binomial confidence interval for k successes in n trials.

    Endpoints invert the tails: the lower bound solves P(X >= k) = (1-conf)/2
    (zero when k = 0), the upper bound solves P(X <= k) = (1-conf)/2 (one when
    k = n).  Solved to well within 1e-10 absolute tolerance.
    """
    if not isinstance(k, int) or not isinstance(n, int):
        raise StatsError("k and n must be integers")
    if n < 1 or not 0 <= k <= n:
        raise StatsError(f"need 0 <= k <= n with n >= 1, got k={k}, n={n}")
    if not 0.0 < conf < 1.0:
        raise StatsError(f"confidence level must lie in (0, 1), got {conf}")
    half_alpha = (1.0 - conf) / 2.0
    if k == 0:
        lo = 0.0
    else:
        lo = _bisect_probability(
            lambda p: binom_upper_tail(k, n, p), half_alpha, increasing=True
        )
    if k == n:
        hi = 1.0
    else:
        hi = _bisect_probability(
            lambda p: binom_lower_tail(k, n, p), half_alpha, increasing=False
        )
    return lo, hi


class HypotheticalAnswer(Enum):
    """Answer to the questionnaire item asking which single bet the subject
    would have placed had there been no informational draws at all."""

    WHITE = "White"
    GREEN = "Green"
    YELLOW = "Yellow"
    GREEN_OR_YELLOW = "GreenOrYellow"


@dataclass(frozen=True)
class ChoiceRecord:
    subject_id: str
    rule: DecisionRule
    hypothetical_answer: Optional[HypotheticalAnswer] = None


@dataclass(frozen=True)
class ChoiceDataset:
    """Per-subject elicited rules plus aggregate-level annotations.

    Annotations carry facts that are only known at the aggregate level
    (e.g. questionnaire tallies without per-subject attribution); they do
    not travel through the CSV format.
    """

    records: tuple[ChoiceRecord, ...]
    annotations: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        ids = [r.subject_id for r in self.records]
        if len(set(ids)) != len(ids):
            raise StatsError("subject ids must be unique")

    def __len__(self) -> int:
        return len(self.records)


def write_csv(dataset: ChoiceDataset, out: Union[str, TextIO]) -> None:
    """Dataset file format: header subject_id,rule,hypothetical_answer."""
    if isinstance(out, str):
        with open(out, "w", newline="") as fh:
            write_csv(dataset, fh)
        return
    writer = csv.writer(out)
    writer.writerow(["subject_id", "rule", "hypothetical_answer"])
    for rec in dataset.records:
        answer = rec.hypothetical_answer.value if rec.hypothetical_answer else ""
        writer.writerow([rec.subject_id, rec.rule.code, answer])


def read_csv(source: Union[str, TextIO]) -> ChoiceDataset:
    if isinstance(source, str):
        with open(source, newline="") as fh:
            return read_csv(fh)
    reader = csv.DictReader(source)
    expected = ["subject_id", "rule", "hypothetical_answer"]
    if reader.fieldnames != expected:
        raise StatsError(f"expected CSV header {expected}, got {reader.fieldnames}")
    records = []
    for row in reader:
        answer = row["hypothetical_answer"].strip()
        records.append(
            ChoiceRecord(
                subject_id=row["subject_id"],
                rule=DecisionRule.from_code(row["rule"]),
                hypothetical_answer=HypotheticalAnswer(answer) if answer else None,
            )
        )
    return ChoiceDataset(records=tuple(records))


def dataset_to_csv_text(dataset: ChoiceDataset) -> str:
    buf = io.StringIO()
    write_csv(dataset, buf)
    return buf.getvalue()


def _is_middle_white(rule: DecisionRule) -> bool:
    return rule.bets[1] is Bet.WHITE and rule.bets[2] is Bet.WHITE


def _is_middle_split(rule: DecisionRule) -> bool:
    middle = (rule.bets[1], rule.bets[2])
    return middle in ((Bet.GREEN, Bet.YELLOW), (Bet.YELLOW, Bet.GREEN))


@dataclass(frozen=True)
class FrequencyTable:
    """Counts and 1-decimal display percentages for a choice dataset.

    Rules are ordered by descending count, ties by first appearance in the
    dataset.  Categories follow the rule classification; the two pattern
    rows single out rules that bet White after both mixed draws (the
    analogue of the classic ambiguity-averse urn choice) and rules that
    split the mixed draws between Green and Yellow.
    """

    total: int
    rules: tuple[tuple[DecisionRule, int, float], ...]
    categories: tuple[tuple[str, int, float], ...]
    patterns: tuple[tuple[str, int, float], ...]

    def category_count(self, label: str) -> int:
        return dict((c, n) for c, n, _ in self.categories)[label]

    def pattern_count(self, label: str) -> int:
        return dict((p, n) for p, n, _ in self.patterns)[label]

    def rule_count(self, rule: DecisionRule) -> int:
        return dict((r, n) for r, n, _ in self.rules).get(rule, 0)


def _pct(count: int, total: int) -> float:
    return round(100.0 * count / total, 1)


def aggregate(
    dataset: ChoiceDataset, cfg: ExperimentConfig = DEFAULT_CONFIG
) -> FrequencyTable:
    """Frequency table over rules, categories, and mixed-draw patterns."""
    if not dataset.records:
        raise StatsError("cannot aggregate an empty dataset")
    total = len(dataset.records)
    counts: dict[DecisionRule, int] = {}
    first_seen: dict[DecisionRule, int] = {}
    for i, rec in enumerate(dataset.records):
        counts[rec.rule] = counts.get(rec.rule, 0) + 1
        first_seen.setdefault(rec.rule, i)
    ordered = sorted(counts, key=lambda r: (-counts[r], first_seen[r]))
    rules = tuple((r, counts[r], _pct(counts[r], total)) for r in ordered)

    cat_counts = {cls.label: 0 for cls in RuleClass}
    for rec in dataset.records:
        cat_counts[classify(rec.rule, cfg).label] += 1
    categories = tuple(
        (label, n, _pct(n, total))
        for label, n in (
            (RuleClass.DOMINATED.label, cat_counts[RuleClass.DOMINATED.label]),
            (RuleClass.BAYESIAN.label, cat_counts[RuleClass.BAYESIAN.label]),
            (
                RuleClass.UNDOMINATED_NON_BAYESIAN.label,
                cat_counts[RuleClass.UNDOMINATED_NON_BAYESIAN.label],
            ),
        )
    )

    awwd = sum(1 for rec in dataset.records if _is_middle_white(rec.rule))
    split = sum(1 for rec in dataset.records if _is_middle_split(rec.rule))
    patterns = (
        ("aWWd", awwd, _pct(awwd, total)),
        ("aGYd/aYGd", split, _pct(split, total)),
    )
    return FrequencyTable(total=total, rules=rules, categories=categories, patterns=patterns)


@dataclass(frozen=True)
class ResultOneReport:
    """Proportion of dominated choices with its exact confidence interval.

    The p-value tests the null that the true proportion is zero; that test
    is degenerate (any dominated observation refutes the null outright),
    which the note records.
    """

    n: int
    dominated_count: int
    proportion: Fraction
    confidence: float
    ci_low: float
    ci_high: float
    p_value: float
    note: str


def result_one(
    dataset: ChoiceDataset,
    conf: float = 0.95,
    cfg: ExperimentConfig = DEFAULT_CONFIG,
) -> ResultOneReport:
    if not dataset.records:
        raise StatsError("cannot analyze an empty dataset")
    n = len(dataset.records)
    k = sum(
        1 for rec in dataset.records if classify(rec.rule, cfg) is RuleClass.DOMINATED
    )
    lo, hi = clopper_pearson(k, n, conf)
    return ResultOneReport(
        n=n,
        dominated_count=k,
        proportion=Fraction(k, n),
        confidence=conf,
        ci_low=lo,
        ci_high=hi,
        p_value=0.0 if k > 0 else 1.0,
        note=(
            "degenerate test against proportion 0: any dominated choice "
            "yields p = 0" if k > 0 else "no dominated choices observed"
        ),
    )


def table_text(table: FrequencyTable) -> str:
    """Aligned text rendering of a frequency table."""
    lines = ["rule    category  count  percent"]
    for rule, count, pct in table.rules:
        cls = classify(rule).label
        lines.append(f"{rule.code:<7} {cls:<9} {count:>5}  {pct:>6.1f}%")
    lines.append("-" * len(lines[0]))
    for label, count, pct in table.categories + table.patterns:
        lines.append(f"{label:<17} {count:>5}  {pct:>6.1f}%")
    lines.append(f"{'total':<17} {table.total:>5}")
    return "\n".join(lines)


def table_json(table: FrequencyTable) -> str:
    payload = {
        "total": table.total,
        "rules": [
            {"rule": r.code, "category": classify(r).label, "count": n, "percent": p}
            for r, n, p in table.rules
        ],
        "categories": [
            {"category": c, "count": n, "percent": p} for c, n, p in table.categories
        ],
        "patterns": [
            {"pattern": t, "count": n, "percent": p} for t, n, p in table.patterns
        ],
    }
    return json.dumps(payload, indent=2)
