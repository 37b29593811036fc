"""Cross-group checks of the three mutually exclusive metric sets.

When prevalences differ and a predictor commits both kinds of error,
equalizing any one set across two groups forces the other two to differ.
``check_pair`` measures which sets two audits share; the ``forced_gaps_*``
functions compute the analytic size of the forced differences.
"""

import logging
from typing import Dict, Iterable, List, Optional

from fairkit.errors import DomainError, EmptyGroup, TheoremViolation
from fairkit.impossibility.models import (
    ComponentMode,
    Finding,
    GapsFromSet1,
    GapsFromSet2,
    IncompatibilityReport,
    PerfectCheck,
    SweepPoint,
    TolerancePolicy,
)
from fairkit.metrics.core import (
    audit_rates,
    calibration_from_set1,
    pred_rate_from_set2,
    set2_from_set1,
)
from fairkit.metrics.models import GroupAudit, MetricSet, PredictorClass, Set1Metrics

logger = logging.getLogger(__name__)

COMPARED_METRICS = (
    "tpr", "fpr", "fnr", "tnr",
    "ppv", "for_rate", "fdr", "npv",
    "calibration", "pred_rate",
)

# The two leading components decide set equality.
_LEADING = {
    MetricSet.SET1: ("tpr", "fpr"),
    MetricSet.SET2: ("ppv", "for_rate"),
    MetricSet.SET3: ("calibration",),
}


def check_pair(a: GroupAudit, b: GroupAudit, tol: Optional[TolerancePolicy] = None) -> IncompatibilityReport:
    """Compare two group audits set by set.

    Args:
        a: Audit of the first group
        b: Audit of the second group
        tol: Tolerances; defaults come from settings

    Returns:
        Equality flags per set, the gaps observed in the other sets for each
        equal set, and the mutual-exclusivity tripwire.
    """
    tol = tol or TolerancePolicy()
    for audit in (a, b):
        if audit.counts is not None and audit.counts.total == 0:
            raise EmptyGroup(f"group {audit.group!r} is empty")

    gaps: Dict[str, float] = {}
    for name in COMPARED_METRICS:
        va, vb = a.metric(name), b.metric(name)
        if va is not None and vb is not None:
            gaps[name] = abs(va - vb)
    component_equal = {name: gap <= tol.eps_rate for name, gap in gaps.items()}

    strict: Dict[MetricSet, Optional[bool]] = {}
    flags: Dict[MetricSet, Optional[bool]] = {}
    for metric_set, leading in _LEADING.items():
        if not all(name in gaps for name in leading):
            strict[metric_set] = flags[metric_set] = None
            continue
        matches = [component_equal[name] for name in leading]
        strict[metric_set] = all(matches)
        flags[metric_set] = any(matches) if tol.component_mode is ComponentMode.ANY else all(matches)

    forced: List[Finding] = []
    for source, equal in flags.items():
        if not equal:
            continue
        for target, leading in _LEADING.items():
            if target is source:
                continue
            for name in leading:
                if name in gaps and gaps[name] > tol.eps_rate:
                    forced.append(Finding(source_set=source, target_set=target, component=name, gap=gaps[name]))

    prevalence_differs = (
        a.prevalence is not None
        and b.prevalence is not None
        and abs(a.prevalence - b.prevalence) > tol.eps_prev
    )
    both_fallible = (
        a.klass is PredictorClass.FALLIBLE
        and b.klass is PredictorClass.FALLIBLE
        and a.commits_both_errors
        and b.commits_both_errors
    )
    n_equal = sum(1 for flag in strict.values() if flag)

    return IncompatibilityReport(
        group_a=a.group,
        group_b=b.group,
        prevalence_differs=prevalence_differs,
        klass_a=a.klass,
        klass_b=b.klass,
        set1_equal=flags[MetricSet.SET1],
        set2_equal=flags[MetricSet.SET2],
        set3_equal=flags[MetricSet.SET3],
        forced=forced,
        component_gaps=gaps,
        component_equal=component_equal,
        theorem_violated=prevalence_differs and both_fallible and n_equal >= 2,
    )


def assert_no_violation(report: IncompatibilityReport) -> None:
    """Raise TheoremViolation when the tripwire fired."""
    if report.theorem_violated:
        logger.error("Tripwire fired for %s vs %s: %s", report.group_a, report.group_b, report.model_dump())
        raise TheoremViolation(
            f"groups {report.group_a!r} and {report.group_b!r} share two metric sets "
            f"despite different prevalences: {report.component_gaps}"
        )


def forced_gaps_from_set1(tpr: float, fpr: float, prev_a: float, prev_b: float) -> GapsFromSet1:
    """Gaps in calibration, PPV and FOR forced by a shared (tpr, fpr).

    Raises:
        DomainError: prevalences equal or outside (0, 1); no false positives;
            trivial predictor
    """
    _check_prevalences(prev_a, prev_b)
    _check_rate("tpr", tpr)
    _check_rate("fpr", fpr)
    if fpr == 0.0:
        raise DomainError("fpr = 0 means no false positives; the predictor is outside the theorem's scope")
    if tpr == 1.0 and fpr == 1.0:
        raise DomainError("always-positive predictor is trivial")

    set1 = Set1Metrics(tpr=tpr, fpr=fpr, fnr=1.0 - tpr, tnr=1.0 - fpr)
    set2_a, set2_b = set2_from_set1(set1, prev_a), set2_from_set1(set1, prev_b)
    return GapsFromSet1(
        cal_gap=abs(calibration_from_set1(tpr, fpr, prev_a) - calibration_from_set1(tpr, fpr, prev_b)),
        ppv_gap=abs(set2_a.ppv - set2_b.ppv),
        for_gap=abs(set2_a.for_rate - set2_b.for_rate),
    )


def forced_gaps_from_set2(ppv: float, for_rate: float, prev_a: float, prev_b: float) -> GapsFromSet2:
    """Gaps in calibration, TPR and FPR forced by a shared (ppv, for_rate).

    Raises:
        DomainError: prevalences equal or outside (0, 1); uninformative or
            error-free predictor; implied prediction rate outside (0, 1)
    """
    _check_prevalences(prev_a, prev_b)
    _check_rate("ppv", ppv)
    _check_rate("for_rate", for_rate)
    if ppv == for_rate:
        raise DomainError("ppv equals for_rate: the prediction carries no information")
    if for_rate == 0.0 or ppv == 1.0:
        raise DomainError("for_rate > 0 and ppv < 1 are required (both error types must occur)")

    implied = {}
    for prev in (prev_a, prev_b):
        q = pred_rate_from_set2(ppv, for_rate, prev)
        if not 0.0 < q < 1.0:
            raise DomainError(f"implied prediction rate {q} at prevalence {prev} makes the predictor trivial")
        implied[prev] = (q / prev, ppv * q / prev, (1.0 - ppv) * q / (1.0 - prev))

    (cal_a, tpr_a, fpr_a), (cal_b, tpr_b, fpr_b) = implied[prev_a], implied[prev_b]
    return GapsFromSet2(
        cal_gap=abs(cal_a - cal_b),
        tpr_gap=abs(tpr_a - tpr_b),
        fpr_gap=abs(fpr_a - fpr_b),
    )


def accuracy_sweep(
        tpr: float,
        fpr: float,
        prev_a: float,
        prev_b: float,
        scales: Iterable[float],
) -> List[SweepPoint]:
    """Forced gaps as both error terms shrink by each factor in ``scales``.

    At scale s the predictor has tpr_s = 1 - (1 - tpr) * s and
    fpr_s = fpr * s; s = 1 is the given predictor, s -> 0 a perfect one.
    """
    points = []
    for scale in scales:
        if not 0.0 < scale <= 1.0:
            raise DomainError(f"scale must lie in (0, 1], got {scale}")
        tpr_s, fpr_s = 1.0 - (1.0 - tpr) * scale, fpr * scale
        gaps = forced_gaps_from_set1(tpr_s, fpr_s, prev_a, prev_b)
        points.append(SweepPoint(scale=scale, tpr=tpr_s, fpr=fpr_s, **gaps._asdict()))
    return points


def perfect_predictor_check(prev_a: float, prev_b: float) -> PerfectCheck:
    """Which measures a perfect predictor equalizes across two prevalences.

    Every set metric passes; the plain prediction rate does not once
    prevalences differ.
    """
    _check_prevalences(prev_a, prev_b, allow_equal=True)
    a = audit_rates("a", 1.0, 0.0, prev_a)
    b = audit_rates("b", 1.0, 0.0, prev_b)
    values_a = {name: a.metric(name) for name in COMPARED_METRICS}
    values_b = {name: b.metric(name) for name in COMPARED_METRICS}
    return PerfectCheck(
        prev_a=prev_a,
        prev_b=prev_b,
        values_a=values_a,
        values_b=values_b,
        passes={name: values_a[name] == values_b[name] for name in COMPARED_METRICS},
    )


def _check_prevalences(prev_a: float, prev_b: float, allow_equal: bool = False) -> None:
    for prev in (prev_a, prev_b):
        if not 0.0 < prev < 1.0:
            raise DomainError(f"prevalence must lie in (0, 1), got {prev}")
    if not allow_equal and prev_a == prev_b:
        raise DomainError("prevalences are equal; nothing is forced")


def _check_rate(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value}")
