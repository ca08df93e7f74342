"""Reference dataset bundled with the package.

Twenty-seven subjects' elicited decision rules from a lab session of this
design, reconstructed from the published aggregate counts; subject ids are
synthetic.  The questionnaire's hypothetical no-draws answers are known
only as aggregate tallies and therefore live in the dataset annotations
rather than on individual records.
"""

from __future__ import annotations

from .core import DecisionRule
from .stats import ChoiceDataset, ChoiceRecord

# (rule code, count), in reporting order: descending frequency.
BUNDLED_RULE_COUNTS: tuple[tuple[str, int], ...] = (
    ("GWWY", 13),
    ("GGGY", 5),
    ("WWWW", 3),
    ("GGYY", 2),
    ("WWWY", 1),
    ("GGGG", 1),
    ("GYWW", 1),
    ("GYGY", 1),
)

# Aggregate questionnaire tallies: how many subjects in each group answered
# "White" to the hypothetical question about a run without informational
# draws.  No per-subject attribution exists.
BUNDLED_ANNOTATIONS: dict[str, str] = {
    "hypothetical_no_draw_white_among_aWWd": "15/17",
    "hypothetical_no_draw_white_among_bayesian": "2/9",
}


def bundled_dataset() -> ChoiceDataset:
    records = []
    i = 0
    for code, count in BUNDLED_RULE_COUNTS:
        rule = DecisionRule.from_code(code)
        for _ in range(count):
            i += 1
            records.append(ChoiceRecord(subject_id=f"S{i:02d}", rule=rule))
    return ChoiceDataset(records=tuple(records), annotations=dict(BUNDLED_ANNOTATIONS))
