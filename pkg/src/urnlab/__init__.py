"""Decision-rule workbench for two-urn betting experiments with informational draws.

Core objects: bets, decision rules (one bet per informational-draw pair),
and the exact-rational act polynomials they induce.  On top of that sit
dominance classification, classical ambiguity-preference evaluation, a
fully state-resolved consistency check, exact binomial statistics, an
event-sourced session engine, an HTTP service, and a CLI.
"""

from .core import (
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
)
from .classification import (
    DominanceCertificate,
    RuleClass,
    bayesian_certificate,
    bayesian_set,
    certificate_for,
    classify,
    dominated_set,
    dominates,
    improvement_delta,
    is_bayesian,
)
from .preferences import (
    MaxminEU,
    Prior,
    SEU,
    SmoothAmbiguity,
    maxmin_value,
    monotonicity_audit,
    optimal_rules,
    seu_value,
    smooth_value,
)
from .savage import (
    Preference,
    SavageAct,
    SavageState,
    derive_preference,
    permute_act,
    risky_improvement_step,
    rule_to_savage_act,
    savage_consistency,
)
from .stats import (
    ChoiceDataset,
    ChoiceRecord,
    FrequencyTable,
    HypotheticalAnswer,
    aggregate,
    clopper_pearson,
    result_one,
)
from .data import bundled_dataset
from .engine import (
    AgentPolicy,
    EllsbergType,
    MaxminAgent,
    Phase,
    SessionRecord,
    SeuAgent,
    UniformRandom,
    advance,
    new_session,
    replay,
    resolve_bet,
    simulate_population,
)

__version__ = "0.1.0"
