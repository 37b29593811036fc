import math

import pytest

from fairkit.audit.models import SyntheticGroup, SyntheticSpec
from fairkit.audit.synthetic import generate
from fairkit.equalizer import (
    DecisionRule,
    MetricId,
    OddsObjective,
    equalize_odds_pair,
    equalize_single,
    evaluate_rule,
    roc_curve,
    upper_hull,
)
from fairkit.equalizer.roc import counts_at, group_arrays
from fairkit.equalizer.search import hull_intersection, metric_value
from fairkit.errors import DomainError, MissingScore
from fairkit.impossibility import TolerancePolicy, check_pair, forced_gaps_from_set1
from fairkit.metrics import ConfusionCounts, calibration_from_set1
from fairkit.metrics.models import OutcomeRecord, PredictorClass

SHARED_ROC_ROWS = [(1, 0.9), (0, 0.8), (1, 0.7), (1, 0.6), (0, 0.4), (0, 0.3), (1, 0.2), (0, 0.1)]


@pytest.fixture(scope="module")
def same_prevalence_records():
    spec = SyntheticSpec(
        groups=[SyntheticGroup(name="A", n=5000, prevalence=0.4), SyntheticGroup(name="B", n=5000, prevalence=0.4)],
        seed=11,
    )
    return generate(spec)


def _rates(records, group, threshold):
    y, scores = group_arrays(records, group)
    counts = counts_at(y, scores, threshold)
    return counts.fp / counts.actual_negative, counts.tp / counts.actual_positive


def _hull_height(records, group, x):
    hull = upper_hull(roc_curve(records, group))
    heights = [
        max(a.tpr, b.tpr) if a.fpr == b.fpr else a.tpr + (x - a.fpr) / (b.fpr - a.fpr) * (b.tpr - a.tpr)
        for a, b in zip(hull, hull[1:])
        if a.fpr <= x <= b.fpr
    ]
    return max(heights)


def test_metric_value():
    counts = ConfusionCounts(tp=3, fp=1, fn=1, tn=5)
    assert metric_value(counts, MetricId.PPV) == pytest.approx(0.75)
    assert metric_value(counts, MetricId.CALIBRATION) == pytest.approx(1.0)
    assert metric_value(ConfusionCounts(fn=2, tn=2), MetricId.PPV) is None


@pytest.mark.parametrize("target", [MetricId.TPR, MetricId.FPR, MetricId.PRED_RATE])
def test_identical_distributions_equalize_everything(same_prevalence_records, target):
    result = equalize_single(same_prevalence_records, "A", target=target, tol=TolerancePolicy(eps_rate=5e-3))
    other = result.groups[1]
    assert other.group == "B"
    assert other.achieved
    assert other.target_gap < 5e-3
    assert max(other.metric_gaps.values()) < 0.05


@pytest.mark.parametrize("seed", [7, 19, 2024])
def test_calibration_target_forces_set1_and_set2_gaps(seed):
    records = generate(SyntheticSpec.demo(), seed=seed)
    tol = TolerancePolicy(eps_rate=1e-3)
    result = equalize_single(records, "A", target=MetricId.CALIBRATION, tol=tol)
    ref, other = result.groups
    assert result.ref_threshold == 0.5
    assert ref.rule == DecisionRule.at("A", 0.5)
    assert other.achieved and other.target_gap <= 1e-3
    assert other.rule.deterministic
    assert max(other.metric_gaps["tpr"], other.metric_gaps["fpr"]) > 0.01
    assert max(other.metric_gaps["ppv"], other.metric_gaps["for_rate"]) > 0.01
    assert result.unachievable == []

    report = check_pair(ref.audit, other.audit, tol)
    assert report.set3_equal
    assert not report.theorem_violated


def test_tpr_target_matches_forced_calibration_gap(demo_records):
    result = equalize_single(demo_records, "A", target=MetricId.TPR)
    a, b = result.groups[0].audit, result.groups[1].audit
    assert abs(a.set1.tpr - b.set1.tpr) < 1e-3
    predicted = forced_gaps_from_set1(b.set1.tpr, b.set1.fpr, a.prevalence, b.prevalence).cal_gap
    measured = abs(a.set3.calibration - b.set3.calibration)
    assert measured == pytest.approx(predicted, rel=0.1)


def test_equalize_single_is_deterministic(demo_records):
    first = equalize_single(demo_records, "A", target=MetricId.PPV)
    second = equalize_single(demo_records, "A", target=MetricId.PPV)
    assert first == second


def test_unachievable_target_is_reported(make_records):
    records = make_records([
        ("A", 1, 0.9), ("A", 0, 0.6), ("A", 0, 0.2), ("A", 0, 0.1),
        ("B", 1, 0.8), ("B", 0, 0.7), ("B", 0, 0.3),
    ])
    result = equalize_single(records, "A", target=MetricId.FPR)
    other = result.groups[1]
    assert not other.achieved
    assert result.unachievable == ["B"]
    assert other.target_gap == pytest.approx(1 / 6)
    assert other.rule.t_low == 0.7


def test_ties_go_to_the_larger_threshold(make_records):
    records = make_records([
        ("A", 1, 0.9), ("A", 1, 0.3), ("A", 0, 0.1),
        ("B", 1, 0.8), ("B", 1, 0.2), ("B", 0, 0.5), ("B", 0, 0.4),
    ])
    result = equalize_single(records, "A", target=MetricId.TPR)
    assert result.groups[1].rule.t_low == 0.8
    assert result.groups[1].target_gap == 0.0


def test_hull_intersection_points_and_overlaps():
    a = [(0.0, 0.0), (0.2, 0.6), (1.0, 1.0)]
    b = [(0.0, 0.0), (0.6, 0.8), (1.0, 1.0)]
    points, segments = hull_intersection(a, b)
    assert len(points) == 2
    assert points[0] == pytest.approx((0.0, 0.0))
    assert points[1] == pytest.approx((0.6, 0.8))
    assert len(segments) == 1
    assert segments[0][0] == pytest.approx((0.6, 0.8))
    assert segments[0][1] == pytest.approx((1.0, 1.0))


@pytest.mark.parametrize("objective", list(OddsObjective))
def test_odds_pair_equalizes_expected_rates(demo_records, objective):
    result = equalize_odds_pair(demo_records, "A", "B", objective)
    fpr_t, tpr_t = result.target
    assert tpr_t >= fpr_t - 1e-12
    for group in ("A", "B"):
        expected = result.expected[group]
        assert expected[0] == pytest.approx(fpr_t, abs=1e-9)
        assert expected[1] == pytest.approx(tpr_t, abs=1e-9)
        assert tpr_t <= _hull_height(demo_records, group, fpr_t) + 1e-9

        rule = result.rules[group]
        low, high = _rates(demo_records, group, rule.t_low), _rates(demo_records, group, rule.t_high)
        realized = [rule.mix * lo + (1 - rule.mix) * hi for lo, hi in zip(low, high)]
        assert realized[0] == pytest.approx(fpr_t, abs=1e-9)
        assert realized[1] == pytest.approx(tpr_t, abs=1e-9)


def test_odds_pair_monte_carlo_matches_calibration_formula(demo_records):
    result = equalize_odds_pair(demo_records, "A", "B")
    fpr_t, tpr_t = result.target
    audits = evaluate_rule(demo_records, result.rules, seed=2024)
    for group, audit in audits.items():
        counts = audit.counts
        sd_tpr = math.sqrt(tpr_t * (1 - tpr_t) / counts.actual_positive)
        sd_fpr = math.sqrt(fpr_t * (1 - fpr_t) / counts.actual_negative)
        # only records between the two thresholds are randomized, so these
        # binomial deviations overstate the spread
        assert abs(audit.set1.tpr - tpr_t) <= 3 * sd_tpr + 1e-12
        assert abs(audit.set1.fpr - fpr_t) <= 3 * sd_fpr + 1e-12

        odds = (1 - audit.prevalence) / audit.prevalence
        expected = calibration_from_set1(tpr_t, fpr_t, audit.prevalence)
        assert abs(audit.set3.calibration - expected) <= 3 * (sd_tpr + sd_fpr * odds) + 1e-12


@pytest.mark.parametrize("objective", list(OddsObjective))
def test_identical_curves_get_identical_rules(make_records, objective):
    records = make_records([("A", y, s) for y, s in SHARED_ROC_ROWS] + [("B", y, s) for y, s in SHARED_ROC_ROWS])
    result = equalize_odds_pair(records, "A", "B", objective)
    a, b = result.rules["A"], result.rules["B"]
    assert (a.t_low, a.t_high, a.mix) == (b.t_low, b.t_high, b.mix)
    assert result.expected["A"] == result.expected["B"]
    if objective is OddsObjective.MAX_ACCURACY:
        assert a.deterministic


def test_evaluate_rule_threshold_above_all_scores(make_records):
    records = make_records([("A", 1, 0.9), ("A", 0, 0.2), ("B", 1, 0.4), ("B", 0, 0.1)])
    audits = evaluate_rule(records, {g: DecisionRule.at(g, 1.5) for g in ("A", "B")}, seed=1)
    assert list(audits) == ["A", "B"]
    assert all(a.klass is PredictorClass.TRIVIAL_ALWAYS_NEGATIVE for a in audits.values())


def test_full_mix_equals_low_threshold(demo_records):
    mixed = {g: DecisionRule(group=g, t_low=0.4, t_high=0.6, mix=1.0) for g in ("A", "B")}
    fixed = {g: DecisionRule.at(g, 0.4) for g in ("A", "B")}
    assert evaluate_rule(demo_records, mixed, seed=5) == evaluate_rule(demo_records, fixed, seed=99)


def test_evaluate_rule_is_seeded(demo_records):
    rules = {g: DecisionRule(group=g, t_low=0.4, t_high=0.6, mix=0.5) for g in ("A", "B")}
    assert evaluate_rule(demo_records, rules, seed=3) == evaluate_rule(demo_records, rules, seed=3)
    assert evaluate_rule(demo_records, rules, seed=3) != evaluate_rule(demo_records, rules, seed=4)


def test_evaluate_rule_errors(make_records):
    records = make_records([("A", 1, 0.9), ("B", 0, 0.2)])
    with pytest.raises(DomainError):
        evaluate_rule(records, {"A": DecisionRule.at("A", 0.5)}, seed=1)
    unscored = [OutcomeRecord(y=True, pred=True, group="A")]
    with pytest.raises(MissingScore):
        evaluate_rule(unscored, {"A": DecisionRule.at("A", 0.5)}, seed=1)
