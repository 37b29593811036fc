import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fairkit.equalizer import roc_curve, upper_hull
from fairkit.errors import DegenerateGroup, MissingScore
from fairkit.metrics import accumulate
from fairkit.metrics.models import OutcomeRecord

# scores on a coarse grid so ties are common
scores = st.integers(min_value=0, max_value=20).map(lambda i: i / 20)
samples = st.lists(st.tuples(st.booleans(), scores), min_size=2, max_size=200).filter(
    lambda rows: any(y for y, _ in rows) and not all(y for y, _ in rows)
)


def _records(rows, group="g"):
    return [OutcomeRecord(y=y, pred=s >= 0.5, group=group, score=s) for y, s in rows]


def test_two_record_curve(make_records):
    points = roc_curve(make_records([("g", 1, 0.9), ("g", 0, 0.4)]), "g")
    assert [(p.fpr, p.tpr) for p in points] == [(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
    assert points[0].threshold > 0.9
    assert [p.threshold for p in points[1:]] == [0.9, 0.4]


def test_equal_scores_give_the_two_endpoints(make_records):
    points = roc_curve(make_records([("g", 1, 0.5), ("g", 0, 0.5), ("g", 1, 0.5)]), "g")
    assert [(p.fpr, p.tpr) for p in points] == [(0.0, 0.0), (1.0, 1.0)]


def test_single_class_group_rejected(make_records):
    with pytest.raises(DegenerateGroup):
        roc_curve(make_records([("g", 1, 0.2), ("g", 1, 0.7)]), "g")


def test_missing_score_rejected():
    records = [OutcomeRecord(y=True, pred=True, group="g"), OutcomeRecord(y=False, pred=False, group="g", score=0.1)]
    with pytest.raises(MissingScore):
        roc_curve(records, "g")


def test_other_groups_are_ignored(make_records):
    records = make_records([("g", 1, 0.9), ("h", 1, 0.1), ("g", 0, 0.4), ("h", 0, 0.8)])
    assert len(roc_curve(records, "g")) == 3


@given(samples)
def test_counts_match_brute_force(rows):
    records = _records(rows)
    points = roc_curve(records, "g")
    assert len(points) == len({s for _, s in rows}) + 1
    for point in points:
        thresholded = [r.model_copy(update={"pred": r.score >= point.threshold}) for r in records]
        assert accumulate(thresholded)["g"] == point.counts


@given(samples)
def test_curve_is_monotone(rows):
    points = roc_curve(_records(rows), "g")
    thresholds = [p.threshold for p in points]
    assert thresholds == sorted(thresholds, reverse=True)
    assert len(set(thresholds)) == len(thresholds)
    for prev, cur in zip(points, points[1:]):
        assert cur.fpr >= prev.fpr and cur.tpr >= prev.tpr
    assert (points[0].fpr, points[0].tpr) == (0.0, 0.0)
    assert (points[-1].fpr, points[-1].tpr) == (1.0, 1.0)


def _hull_height(hull, x):
    heights = []
    for a, b in zip(hull, hull[1:]):
        if a.fpr <= x <= b.fpr:
            if b.fpr == a.fpr:
                heights.append(max(a.tpr, b.tpr))
            else:
                heights.append(a.tpr + (x - a.fpr) / (b.fpr - a.fpr) * (b.tpr - a.tpr))
    return max(heights)


@given(samples)
def test_upper_hull_dominates_curve(rows):
    points = roc_curve(_records(rows), "g")
    hull = upper_hull(points)
    assert (hull[0].fpr, hull[0].tpr) == (0.0, 0.0)
    assert (hull[-1].fpr, hull[-1].tpr) == (1.0, 1.0)
    assert all(b.fpr >= a.fpr and b.tpr >= a.tpr for a, b in zip(hull, hull[1:]))
    for point in points:
        assert point.tpr <= _hull_height(hull, point.fpr) + 1e-12
    # slopes never increase along an upper hull
    slopes = [
        np.inf if b.fpr == a.fpr else (b.tpr - a.tpr) / (b.fpr - a.fpr)
        for a, b in zip(hull, hull[1:])
    ]
    assert all(s2 <= s1 + 1e-12 for s1, s2 in zip(slopes, slopes[1:]))


def test_upper_hull_drops_points_below_the_chord(make_records):
    # (0.5, 0.5) sits inside the hull
    records = make_records([("g", 1, 0.9), ("g", 0, 0.4), ("g", 1, 0.3), ("g", 0, 0.2)])
    hull = upper_hull(roc_curve(records, "g"))
    assert [(p.fpr, p.tpr) for p in hull] == [(0.0, 0.0), (0.0, 0.5), (0.5, 1.0), (1.0, 1.0)]
