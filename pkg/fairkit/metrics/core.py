"""Confusion-count accumulation, the three metric sets and the bridges between sets.

Counts stay integers until the final division. Degenerate denominators
raise instead of producing NaN.
"""

from collections import defaultdict
from typing import Dict, Iterable, Optional

from fairkit.errors import DegenerateDenominator, DomainError, EmptyGroup
from fairkit.metrics.models import (
    ConfusionCounts,
    GroupAudit,
    OutcomeRecord,
    PredictorClass,
    Set1Metrics,
    Set2Metrics,
    Set3Metric,
)

# (pred, y) -> cell
_CELLS = {
    (True, True): "tp",
    (True, False): "fp",
    (False, True): "fn",
    (False, False): "tn",
}


def accumulate(records: Iterable[OutcomeRecord]) -> Dict[str, ConfusionCounts]:
    """Count each record into exactly one cell of its group's confusion counts."""
    cells: Dict[str, Dict[str, int]] = defaultdict(lambda: {"tp": 0, "fp": 0, "fn": 0, "tn": 0})
    for record in records:
        cells[record.group][_CELLS[(record.pred, record.y)]] += 1
    return {group: ConfusionCounts(**c) for group, c in cells.items()}


def counts_from_arrays(y, pred) -> ConfusionCounts:
    """Confusion counts from two aligned boolean numpy arrays."""
    return ConfusionCounts(
        tp=int((pred & y).sum()),
        fp=int((pred & ~y).sum()),
        fn=int((~pred & y).sum()),
        tn=int((~pred & ~y).sum()),
    )


def prevalence(counts: ConfusionCounts) -> float:
    if counts.total == 0:
        raise EmptyGroup("prevalence is undefined for an empty group")
    return counts.actual_positive / counts.total


def set1_metrics(counts: ConfusionCounts) -> Set1Metrics:
    """Rates of prediction given the actual outcome."""
    if counts.actual_positive == 0:
        raise DegenerateDenominator("no actual positives in group: TPR/FNR undefined")
    if counts.actual_negative == 0:
        raise DegenerateDenominator("no actual negatives in group: FPR/TNR undefined")
    pos, neg = counts.actual_positive, counts.actual_negative
    return Set1Metrics(
        tpr=counts.tp / pos,
        fpr=counts.fp / neg,
        fnr=counts.fn / pos,
        tnr=counts.tn / neg,
    )


def set2_metrics(counts: ConfusionCounts) -> Set2Metrics:
    """Rates of the actual outcome given the prediction."""
    if counts.predicted_positive == 0:
        raise DegenerateDenominator("no positive predictions in group: PPV/FDR undefined")
    if counts.predicted_negative == 0:
        raise DegenerateDenominator("no negative predictions in group: FOR/NPV undefined")
    pp, pn = counts.predicted_positive, counts.predicted_negative
    return Set2Metrics(
        ppv=counts.tp / pp,
        for_rate=counts.fn / pn,
        fdr=counts.fp / pp,
        npv=counts.tn / pn,
    )


def set3_from_totals(actual_positive: int, predicted_positive: int, total: int) -> Set3Metric:
    """Calibration from group totals alone (no joint counts needed)."""
    if actual_positive <= 0:
        raise DegenerateDenominator("no actual positives in group: calibration undefined")
    return Set3Metric(
        calibration=predicted_positive / actual_positive,
        pred_rate=predicted_positive / total,
        prevalence=actual_positive / total,
    )


def set3_metric(counts: ConfusionCounts) -> Set3Metric:
    """Ratio of predicted to actual occurrences."""
    return set3_from_totals(counts.actual_positive, counts.predicted_positive, counts.total)


def classify(counts: ConfusionCounts) -> PredictorClass:
    """Perfect first, then the two trivial tags, then Fallible."""
    if counts.total == 0:
        raise EmptyGroup("cannot classify a predictor on an empty group")
    if counts.fp == 0 and counts.fn == 0:
        return PredictorClass.PERFECT
    if counts.fn == 0 and counts.tn == 0:
        return PredictorClass.TRIVIAL_ALWAYS_POSITIVE
    if counts.tp == 0 and counts.fp == 0:
        return PredictorClass.TRIVIAL_ALWAYS_NEGATIVE
    return PredictorClass.FALLIBLE


def classify_rates(tpr: float, fpr: float) -> PredictorClass:
    """Same tags as :func:`classify`, for a predictor given only by its rates."""
    if fpr == 0.0 and tpr == 1.0:
        return PredictorClass.PERFECT
    if fpr == 1.0 and tpr == 1.0:
        return PredictorClass.TRIVIAL_ALWAYS_POSITIVE
    if fpr == 0.0 and tpr == 0.0:
        return PredictorClass.TRIVIAL_ALWAYS_NEGATIVE
    return PredictorClass.FALLIBLE


def calibration_from_set1(tpr: float, fpr: float, prevalence: float) -> float:
    """Calibration implied by the Set 1 rates: tpr + fpr * (1 - p) / p."""
    if not 0.0 < prevalence <= 1.0:
        raise DomainError(f"prevalence must lie in (0, 1], got {prevalence}")
    _check_probability("tpr", tpr)
    _check_probability("fpr", fpr)
    return tpr + fpr * (1.0 - prevalence) / prevalence


def set2_from_set1(set1: Set1Metrics, prevalence: float) -> Set2Metrics:
    """Bayes' theorem: predictive values from the rates and the prevalence."""
    if not 0.0 < prevalence < 1.0:
        raise DomainError(f"prevalence must lie in (0, 1), got {prevalence}")
    p, q = prevalence, 1.0 - prevalence
    true_pos, false_pos = set1.tpr * p, set1.fpr * q
    false_neg, true_neg = set1.fnr * p, set1.tnr * q
    predicted_pos = true_pos + false_pos
    predicted_neg = false_neg + true_neg
    if predicted_pos <= 0.0:
        raise DegenerateDenominator("predictor never predicts positive: PPV undefined")
    if predicted_neg <= 0.0:
        raise DegenerateDenominator("predictor never predicts negative: FOR undefined")
    return Set2Metrics(
        ppv=true_pos / predicted_pos,
        for_rate=false_neg / predicted_neg,
        fdr=false_pos / predicted_pos,
        npv=true_neg / predicted_neg,
    )


def pred_rate_from_set2(ppv: float, for_rate: float, prevalence: float) -> float:
    """Solve p = ppv * q + for_rate * (1 - q) for the prediction rate q."""
    _check_probability("ppv", ppv)
    _check_probability("for_rate", for_rate)
    _check_probability("prevalence", prevalence)
    if ppv == for_rate:
        raise DomainError("ppv equals for_rate: the prediction carries no information, P(Pred) is unidentifiable")
    q = (prevalence - for_rate) / (ppv - for_rate)
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"inconsistent inputs: implied prediction rate {q} lies outside [0, 1]")
    return q


def set1_from_set2(set2: Set2Metrics, prevalence: float) -> Set1Metrics:
    """Inverse Bayes: rates given the outcome from the predictive values."""
    if not 0.0 < prevalence < 1.0:
        raise DomainError(f"prevalence must lie in (0, 1), got {prevalence}")
    q = pred_rate_from_set2(set2.ppv, set2.for_rate, prevalence)
    p = prevalence
    tpr = min(1.0, set2.ppv * q / p)
    fpr = min(1.0, set2.fdr * q / (1.0 - p))
    return Set1Metrics(tpr=tpr, fpr=fpr, fnr=1.0 - tpr, tnr=1.0 - fpr)


def audit_counts(group: str, counts: ConfusionCounts) -> GroupAudit:
    """Build a full GroupAudit from one group's confusion counts."""
    return GroupAudit(
        group=group,
        prevalence=prevalence(counts),
        counts=counts,
        set1=_optional(set1_metrics, counts),
        set2=_optional(set2_metrics, counts),
        set3=_optional(set3_metric, counts),
        klass=classify(counts),
        commits_both_errors=counts.commits_both_errors,
    )


def audit_rates(group: str, tpr: float, fpr: float, prevalence: float) -> GroupAudit:
    """Build a GroupAudit analytically from (tpr, fpr) at a prevalence."""
    set1 = Set1Metrics(tpr=tpr, fpr=fpr, fnr=1.0 - tpr, tnr=1.0 - fpr)
    pred_rate = tpr * prevalence + fpr * (1.0 - prevalence)
    return GroupAudit(
        group=group,
        prevalence=prevalence,
        set1=set1,
        set2=_optional(set2_from_set1, set1, prevalence),
        set3=Set3Metric(
            calibration=calibration_from_set1(tpr, fpr, prevalence),
            pred_rate=pred_rate,
            prevalence=prevalence,
        ),
        klass=classify_rates(tpr, fpr),
        commits_both_errors=fpr > 0.0 and tpr < 1.0,
    )


def audit_totals(group: str, total: int, actual_positive: int, predicted_positive: int) -> GroupAudit:
    """Build a GroupAudit from aggregate totals; only Set 3 is computable."""
    if total == 0:
        raise EmptyGroup(f"group {group!r} is empty")
    return GroupAudit(
        group=group,
        prevalence=actual_positive / total,
        set3=_optional(set3_from_totals, actual_positive, predicted_positive, total),
    )


def _optional(fn, *args) -> Optional[object]:
    try:
        return fn(*args)
    except DegenerateDenominator:
        return None


def _check_probability(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value}")
