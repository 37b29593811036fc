"""Per-group decision rules that equalize a metric across groups.

``equalize_single`` anchors the reference group at its default threshold
and searches every distinct-score threshold of each other group.
``equalize_odds_pair`` picks an (fpr, tpr) point on both groups' ROC upper
hulls and realizes it per group by mixing two adjacent hull vertices.
"""

import logging
from collections import defaultdict
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from fairkit.config import settings
from fairkit.errors import DegenerateDenominator, DomainError, MissingScore
from fairkit.equalizer.models import (
    DecisionRule,
    GroupEqualization,
    MetricId,
    OddsEqualization,
    OddsObjective,
    RocPoint,
    SingleEqualization,
)
from fairkit.equalizer.roc import counts_at, group_arrays, roc_from_arrays, upper_hull
from fairkit.impossibility.engine import COMPARED_METRICS
from fairkit.impossibility.models import TolerancePolicy
from fairkit.metrics.core import audit_counts, counts_from_arrays
from fairkit.metrics.models import ConfusionCounts, GroupAudit, OutcomeRecord
from fairkit.rng import uniforms

logger = logging.getLogger(__name__)

GEOMETRY_EPS = 1e-12

Point = Tuple[float, float]


def metric_value(counts: ConfusionCounts, metric: MetricId) -> Optional[float]:
    """Value of ``metric`` for ``counts``; None when its denominator is zero."""
    numerator, denominator = {
        MetricId.TPR: (counts.tp, counts.actual_positive),
        MetricId.FPR: (counts.fp, counts.actual_negative),
        MetricId.PRED_RATE: (counts.predicted_positive, counts.total),
        MetricId.CALIBRATION: (counts.predicted_positive, counts.actual_positive),
        MetricId.PPV: (counts.tp, counts.predicted_positive),
        MetricId.FOR_RATE: (counts.fn, counts.predicted_negative),
    }[metric]
    return numerator / denominator if denominator else None


def equalize_single(
        records: Sequence[OutcomeRecord],
        ref_group: str,
        other_groups: Optional[Sequence[str]] = None,
        target: MetricId = MetricId.TPR,
        tol: Optional[TolerancePolicy] = None,
        ref_threshold: Optional[float] = None,
) -> SingleEqualization:
    """Match ``target`` of every other group to the reference group.

    Each other group gets the deterministic threshold minimizing
    |metric(group) - metric(ref)|; ties go to the larger threshold. A best
    gap above ``tol.eps_rate`` is reported as not achieved, not raised.
    """
    tol = tol or TolerancePolicy()
    ref_threshold = settings.default_threshold if ref_threshold is None else ref_threshold
    if other_groups is None:
        other_groups = sorted({r.group for r in records} - {ref_group})

    ref_y, ref_scores = group_arrays(records, ref_group)
    roc_from_arrays(ref_y, ref_scores, ref_group)  # precondition check only
    ref_counts = counts_at(ref_y, ref_scores, ref_threshold)
    ref_value = metric_value(ref_counts, target)
    if ref_value is None:
        raise DegenerateDenominator(f"{target.value} is undefined for reference group {ref_group!r}")
    ref_audit = audit_counts(ref_group, ref_counts)

    results = [
        GroupEqualization(
            group=ref_group,
            rule=DecisionRule.at(ref_group, ref_threshold),
            target_value=ref_value,
            target_gap=0.0,
            audit=ref_audit,
        )
    ]
    for group in other_groups:
        y, scores = group_arrays(records, group)
        best: Optional[RocPoint] = None
        best_gap = np.inf
        for point in roc_from_arrays(y, scores, group):
            value = metric_value(point.counts, target)
            if value is None:
                continue
            gap = abs(value - ref_value)
            if gap < best_gap:
                best, best_gap = point, gap
        if best is None:
            raise DegenerateDenominator(f"{target.value} is undefined at every threshold of group {group!r}")

        achieved = best_gap <= tol.eps_rate
        if not achieved:
            logger.warning(
                "Unachievable: best %s gap for group %r is %.6g (> %.3g) at threshold %.6g",
                target.value, group, best_gap, tol.eps_rate, best.threshold,
            )
        audit = audit_counts(group, best.counts)
        results.append(
            GroupEqualization(
                group=group,
                rule=DecisionRule.at(group, best.threshold),
                target_value=metric_value(best.counts, target),
                target_gap=float(best_gap),
                achieved=achieved,
                metric_gaps=_metric_gaps(audit, ref_audit),
                audit=audit,
            )
        )

    return SingleEqualization(
        target=target,
        ref_group=ref_group,
        ref_threshold=ref_threshold,
        ref_value=ref_value,
        groups=results,
    )


def equalize_odds_pair(
        records: Sequence[OutcomeRecord],
        group_a: str,
        group_b: str,
        objective: OddsObjective = OddsObjective.MATCH_REFERENCE,
        ref_threshold: Optional[float] = None,
) -> OddsEqualization:
    """Give both groups the same expected (fpr, tpr).

    The shared point lies on both ROC upper hulls; (0, 0) and (1, 1) always
    qualify, so a solution exists for any pair of non-degenerate groups.
    """
    ref_threshold = settings.default_threshold if ref_threshold is None else ref_threshold
    y_a, s_a = group_arrays(records, group_a)
    y_b, s_b = group_arrays(records, group_b)
    hull_a = upper_hull(roc_from_arrays(y_a, s_a, group_a))
    hull_b = upper_hull(roc_from_arrays(y_b, s_b, group_b))

    points, segments = hull_intersection(_coords(hull_a), _coords(hull_b))
    if objective is OddsObjective.MATCH_REFERENCE:
        ref = counts_at(y_a, s_a, ref_threshold)
        anchor = (ref.fp / ref.actual_negative, ref.tp / ref.actual_positive)
        target = _nearest(anchor, points, segments)
    else:
        candidates = sorted(set(points) | {end for seg in segments for end in seg})
        pos = int(y_a.sum() + y_b.sum())
        neg = int(y_a.size + y_b.size) - pos

        def accuracy(point: Point) -> float:
            fpr, tpr = point
            return pos * tpr + neg * (1.0 - fpr)

        target = candidates[0]
        for candidate in candidates[1:]:
            if accuracy(candidate) > accuracy(target):
                target = candidate

    rules, expected = {}, {}
    for group, hull in ((group_a, hull_a), (group_b, hull_b)):
        rules[group], expected[group] = _rule_on_hull(group, hull, target)
    logger.info("Equalized odds for %r/%r at fpr=%.6f tpr=%.6f", group_a, group_b, *target)
    return OddsEqualization(objective=objective, target=target, rules=rules, expected=expected)


def evaluate_rule(
        records: Sequence[OutcomeRecord],
        rules: Mapping[str, DecisionRule],
        seed: int,
) -> Dict[str, GroupAudit]:
    """Apply each group's rule and audit the resulting predictions.

    Record ``i`` uses the i-th uniform of the ``seed`` stream to pick between
    ``t_low`` (probability ``mix``) and ``t_high``, so the outcome depends
    only on (records, rules, seed).
    """
    n = len(records)
    u = uniforms(seed, n)
    thresholds = np.empty(n)
    scores = np.empty(n)
    y = np.empty(n, dtype=bool)
    by_group: Dict[str, List[int]] = defaultdict(list)
    for i, record in enumerate(records):
        rule = rules.get(record.group)
        if rule is None:
            raise DomainError(f"no decision rule for group {record.group!r}")
        if record.score is None:
            raise MissingScore(f"record {i} in group {record.group!r} has no score")
        use_low = rule.deterministic or u[i] < rule.mix
        thresholds[i] = rule.t_low if use_low else rule.t_high
        scores[i] = record.score
        y[i] = record.y
        by_group[record.group].append(i)

    pred = scores >= thresholds
    audits = {}
    for group in sorted(by_group):
        idx = np.asarray(by_group[group])
        audits[group] = audit_counts(group, counts_from_arrays(y[idx], pred[idx]))
    return audits


def hull_intersection(hull_a: List[Point], hull_b: List[Point]) -> Tuple[List[Point], List[Tuple[Point, Point]]]:
    """Points and overlapping segments shared by two hull polylines."""
    points: List[Point] = []
    segments: List[Tuple[Point, Point]] = []
    for a0, a1 in zip(hull_a, hull_a[1:]):
        for b0, b1 in zip(hull_b, hull_b[1:]):
            if (max(a0[0], a1[0]) < min(b0[0], b1[0]) - GEOMETRY_EPS
                    or max(b0[0], b1[0]) < min(a0[0], a1[0]) - GEOMETRY_EPS):
                continue
            hit = _intersect_segments(a0, a1, b0, b1)
            if hit is None:
                continue
            if hit[0] == hit[1]:
                _add_point(points, hit[0])
            else:
                segments.append(hit)
    return points, segments


def _intersect_segments(p0: Point, p1: Point, q0: Point, q1: Point) -> Optional[Tuple[Point, Point]]:
    p, r = np.asarray(p0), np.subtract(p1, p0)
    q, s = np.asarray(q0), np.subtract(q1, q0)
    qp = q - p
    denom = _cross(r, s)
    if abs(denom) <= GEOMETRY_EPS:
        if abs(_cross(qp, r)) > GEOMETRY_EPS:
            return None
        # collinear: overlap on p's parameter line
        rr = float(r @ r)
        t0 = float(qp @ r) / rr
        t1 = t0 + float(s @ r) / rr
        lo, hi = max(0.0, min(t0, t1)), min(1.0, max(t0, t1))
        if lo > hi + GEOMETRY_EPS:
            return None
        start = tuple(float(v) for v in p + lo * r)
        end = tuple(float(v) for v in p + max(lo, hi) * r)
        return start, end
    t = _cross(qp, s) / denom
    u = _cross(qp, r) / denom
    if -GEOMETRY_EPS <= t <= 1.0 + GEOMETRY_EPS and -GEOMETRY_EPS <= u <= 1.0 + GEOMETRY_EPS:
        hit = tuple(float(v) for v in p + min(max(t, 0.0), 1.0) * r)
        return hit, hit
    return None


def _rule_on_hull(group: str, hull: List[RocPoint], target: Point) -> Tuple[DecisionRule, Point]:
    """Two-threshold rule whose expected (fpr, tpr) is ``target``."""
    best_k, best_t, best_dist = 0, 0.0, np.inf
    for k, (v0, v1) in enumerate(zip(hull, hull[1:])):
        t, dist = _project((v0.fpr, v0.tpr), (v1.fpr, v1.tpr), target)
        if dist < best_dist:
            best_k, best_t, best_dist = k, t, dist
    if best_dist > 1e-9:
        logger.warning("Target %s lies %.3g off the hull of group %r", target, best_dist, group)

    v0, v1 = hull[best_k], hull[best_k + 1]
    if best_t <= GEOMETRY_EPS:
        return DecisionRule.at(group, v0.threshold), (v0.fpr, v0.tpr)
    if best_t >= 1.0 - GEOMETRY_EPS:
        return DecisionRule.at(group, v1.threshold), (v1.fpr, v1.tpr)
    # v1 sits further along the ROC, so its threshold is the lower one
    rule = DecisionRule(group=group, t_low=v1.threshold, t_high=v0.threshold, mix=best_t)
    expected = (v0.fpr + best_t * (v1.fpr - v0.fpr), v0.tpr + best_t * (v1.tpr - v0.tpr))
    return rule, expected


def _nearest(anchor: Point, points: List[Point], segments: List[Tuple[Point, Point]]) -> Point:
    best, best_dist = None, np.inf
    for point in points:
        dist = float(np.hypot(point[0] - anchor[0], point[1] - anchor[1]))
        if dist < best_dist:
            best, best_dist = point, dist
    for start, end in segments:
        t, dist = _project(start, end, anchor)
        if dist < best_dist:
            best = (start[0] + t * (end[0] - start[0]), start[1] + t * (end[1] - start[1]))
            best_dist = dist
    return best


def _project(start: Point, end: Point, point: Point) -> Tuple[float, float]:
    """Clamped parameter of ``point`` projected on a segment, and the distance."""
    d = np.subtract(end, start)
    length2 = float(d @ d)
    t = 0.0 if length2 == 0.0 else float(np.subtract(point, start) @ d) / length2
    t = min(max(t, 0.0), 1.0)
    closest = np.asarray(start) + t * d
    return t, float(np.hypot(*(closest - np.asarray(point))))


def _add_point(points: List[Point], point: Point) -> None:
    for existing in points:
        if abs(existing[0] - point[0]) <= GEOMETRY_EPS and abs(existing[1] - point[1]) <= GEOMETRY_EPS:
            return
    points.append(point)


def _coords(hull: List[RocPoint]) -> List[Point]:
    return [(p.fpr, p.tpr) for p in hull]


def _cross(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def _metric_gaps(audit: GroupAudit, ref: GroupAudit) -> Dict[str, float]:
    gaps = {}
    for name in COMPARED_METRICS:
        va, vb = audit.metric(name), ref.metric(name)
        if va is not None and vb is not None:
            gaps[name] = abs(va - vb)
    return gaps
