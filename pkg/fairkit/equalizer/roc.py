"""ROC points per group and their upper convex hull.

A record is predicted positive iff ``score >= threshold``.
"""

from typing import List, Sequence, Tuple

import numpy as np
from scipy.spatial import ConvexHull

from fairkit.errors import DegenerateGroup, MissingScore
from fairkit.metrics.core import counts_from_arrays
from fairkit.metrics.models import ConfusionCounts, OutcomeRecord
from fairkit.equalizer.models import RocPoint


def group_arrays(records: Sequence[OutcomeRecord], group: str) -> Tuple[np.ndarray, np.ndarray]:
    """Outcomes and scores of one group's records, in input order."""
    y, scores = [], []
    for record in records:
        if record.group != group:
            continue
        if record.score is None:
            raise MissingScore(f"a record in group {group!r} has no score")
        y.append(record.y)
        scores.append(record.score)
    return np.asarray(y, dtype=bool), np.asarray(scores, dtype=float)


def counts_at(y: np.ndarray, scores: np.ndarray, threshold: float) -> ConfusionCounts:
    return counts_from_arrays(y, scores >= threshold)


def roc_curve(records: Sequence[OutcomeRecord], group: str) -> List[RocPoint]:
    """ROC points for ``group``, thresholds descending.

    The first point is the always-negative rule (threshold one ulp above the
    highest score); then one point per distinct score, the last being the
    always-positive rule.

    Raises:
        MissingScore: a record of the group has no score
        DegenerateGroup: the group lacks actual positives or actual negatives
    """
    y, scores = group_arrays(records, group)
    return roc_from_arrays(y, scores, group)


def roc_from_arrays(y: np.ndarray, scores: np.ndarray, group: str = "") -> List[RocPoint]:
    pos = int(y.sum())
    neg = int(y.size - pos)
    if pos == 0 or neg == 0:
        raise DegenerateGroup(f"group {group!r} needs both actual positives and actual negatives")

    order = np.argsort(-scores, kind="mergesort")
    sorted_scores, sorted_y = scores[order], y[order]
    tp_cum = np.cumsum(sorted_y)
    fp_cum = np.cumsum(~sorted_y)
    # last position of each run of equal scores
    run_ends = np.append(np.flatnonzero(np.diff(sorted_scores)), sorted_scores.size - 1)

    points = [
        RocPoint(
            threshold=float(np.nextafter(sorted_scores[0], np.inf)),
            fpr=0.0,
            tpr=0.0,
            counts=ConfusionCounts(tp=0, fp=0, fn=pos, tn=neg),
        )
    ]
    for end in run_ends:
        tp, fp = int(tp_cum[end]), int(fp_cum[end])
        points.append(
            RocPoint(
                threshold=float(sorted_scores[end]),
                fpr=fp / neg,
                tpr=tp / pos,
                counts=ConfusionCounts(tp=tp, fp=fp, fn=pos - tp, tn=neg - fp),
            )
        )
    return points


def upper_hull(points: Sequence[RocPoint]) -> List[RocPoint]:
    """Vertices of the ROC upper hull, from (0, 0) to (1, 1).

    The corner (1, 0) is added before hulling so the input is never
    degenerate; every other hull vertex then lies on the upper chain.
    """
    coords = np.array([(p.fpr, p.tpr) for p in points] + [(1.0, 0.0)])
    corner = len(points)
    hull = ConvexHull(coords)
    upper = sorted(int(v) for v in hull.vertices if v != corner)
    return [points[i] for i in upper if (points[i].fpr, points[i].tpr) != (1.0, 0.0)]
