"""ROC curves and per-group decision rules that equalize a metric."""

from fairkit.equalizer.models import (
    DecisionRule,
    MetricId,
    OddsEqualization,
    OddsObjective,
    RocPoint,
    SingleEqualization,
)
from fairkit.equalizer.roc import roc_curve, upper_hull
from fairkit.equalizer.search import equalize_odds_pair, equalize_single, evaluate_rule
