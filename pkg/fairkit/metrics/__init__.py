"""Confusion counts, the three metric sets and the bridges between them."""

from fairkit.metrics.core import (
    accumulate,
    audit_counts,
    audit_rates,
    audit_totals,
    calibration_from_set1,
    classify,
    pred_rate_from_set2,
    set1_from_set2,
    set1_metrics,
    set2_from_set1,
    set2_metrics,
    set3_metric,
)
from fairkit.metrics.models import (
    ConfusionCounts,
    GroupAudit,
    MetricSet,
    OutcomeRecord,
    PredictorClass,
    Set1Metrics,
    Set2Metrics,
    Set3Metric,
)
