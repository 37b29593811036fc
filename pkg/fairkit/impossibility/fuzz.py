"""Randomized machine check of the mutual-exclusivity theorem.

Each trial builds two analytic group audits that share exactly one metric
set at different prevalences and verifies that the other two sets differ.
Trial ``i`` draws from its own ``(seed, i)`` stream, so the report does not
depend on how trials are split across workers.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple

import numpy as np

from fairkit.config import settings
from fairkit.errors import DomainError
from fairkit.impossibility.engine import check_pair
from fairkit.impossibility.models import ComponentMode, FuzzInstance, FuzzReport, TolerancePolicy
from fairkit.metrics.core import audit_rates, set1_from_set2
from fairkit.metrics.models import GroupAudit, MetricSet
from fairkit.rng import stream

logger = logging.getLogger(__name__)

PREVALENCE_RANGE = (0.05, 0.95)
TPR_RANGE = (0.05, 0.95)
MIN_PREVALENCE_GAP = 0.01
MIN_FPR = 1e-4
MAX_ATTEMPTS = 10000
PARTNER_ATTEMPTS = 100
MAX_VIOLATION_EXAMPLES = 50

_SOURCES = (MetricSet.SET1, MetricSet.SET2, MetricSet.SET3)


def theorem_fuzz(
        trials: int,
        seed: int,
        tol: Optional[TolerancePolicy] = None,
        workers: int = 1,
        max_examples: Optional[int] = None,
) -> FuzzReport:
    """Run ``trials`` randomized instances of the theorem.

    Args:
        trials: Number of instances; must be positive
        seed: 64-bit seed
        tol: Tolerances; set equality always uses both components here
        workers: Threads to spread trials over; does not change the result
        max_examples: Non-violating instances echoed in the report

    Returns:
        FuzzReport with the violation count (expected 0) and examples
    """
    if trials <= 0:
        raise DomainError(f"trials must be positive, got {trials}")
    tol = (tol or TolerancePolicy()).model_copy(update={"component_mode": ComponentMode.BOTH})
    max_examples = settings.fuzz_examples if max_examples is None else max_examples

    def run_chunk(indices: range) -> List[FuzzInstance]:
        return [run_trial(i, seed, tol) for i in indices]

    chunks = _partition(trials, max(1, workers))
    if len(chunks) == 1:
        instances = run_chunk(chunks[0])
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            instances = [inst for part in pool.map(run_chunk, chunks) for inst in part]

    violating = [inst for inst in instances if inst.violated]
    examples = violating[:MAX_VIOLATION_EXAMPLES] + [
        inst for inst in instances[:max_examples] if not inst.violated
    ]
    by_source = {s.value: sum(1 for inst in instances if inst.source_set is s) for s in _SOURCES}

    if violating:
        logger.error("%d theorem violation(s) in %d trials (seed %d)", len(violating), trials, seed)
    else:
        logger.info("%d trials, no violations (seed %d)", trials, seed)

    return FuzzReport(
        trials=trials,
        violations=len(violating),
        seed=seed,
        by_source=by_source,
        examples=sorted(examples, key=lambda inst: inst.trial),
    )


def run_trial(trial: int, seed: int, tol: TolerancePolicy) -> FuzzInstance:
    """Sample, build and check one instance."""
    rng = stream(seed, trial)
    source = _SOURCES[int(rng.integers(len(_SOURCES)))]
    a, b = _build_pair(rng, source)
    report = check_pair(a, b, tol)
    gaps = report.component_gaps
    eps = tol.eps_rate

    def differs(name: str) -> bool:
        return gaps.get(name, 0.0) > eps

    flags = {
        MetricSet.SET1: report.set1_equal,
        MetricSet.SET2: report.set2_equal,
        MetricSet.SET3: report.set3_equal,
    }
    ok = flags[source] is True and not report.theorem_violated
    if source is MetricSet.SET1:
        ok = ok and differs("calibration") and differs("ppv") and differs("for_rate")
    elif source is MetricSet.SET2:
        ok = ok and differs("calibration") and differs("tpr") and differs("fpr")
    else:
        ok = ok and report.set1_equal is False and report.set2_equal is False

    if not ok:
        logger.debug("Trial %d (%s) violated: %s", trial, source.value, gaps)
    return FuzzInstance(
        trial=trial,
        source_set=source,
        prev_a=a.prevalence,
        prev_b=b.prevalence,
        rates_a={"tpr": a.set1.tpr, "fpr": a.set1.fpr},
        rates_b={"tpr": b.set1.tpr, "fpr": b.set1.fpr},
        gaps=gaps,
        violated=not ok,
    )


def _build_pair(rng: np.random.Generator, source: MetricSet) -> Tuple[GroupAudit, GroupAudit]:
    """Two analytic audits sharing ``source`` at different prevalences.

    Redraws the whole instance when group A admits no feasible partner.
    """
    for _ in range(MAX_ATTEMPTS):
        pair = _try_pair(rng, source)
        if pair is not None:
            return pair
    raise DomainError(f"could not build an instance sharing {source.value}")


def _try_pair(rng: np.random.Generator, source: MetricSet) -> Optional[Tuple[GroupAudit, GroupAudit]]:
    prev_a, prev_b = _draw_prevalences(rng)
    tpr = rng.uniform(*TPR_RANGE)
    fpr = _draw_fpr(rng, tpr)
    a = audit_rates("a", tpr, fpr, prev_a)

    if source is MetricSet.SET1:
        return a, audit_rates("b", tpr, fpr, prev_b)

    if source is MetricSet.SET2:
        ppv, for_rate = a.set2.ppv, a.set2.for_rate

        def feasible(prev: float) -> bool:
            q = (prev - for_rate) / (ppv - for_rate)
            return 0.0 < q < 1.0

        prev_b = _draw_prevalence_apart(rng, prev_a, feasible)
        if prev_b is None:
            return None
        set1_b = set1_from_set2(a.set2, prev_b)
        return a, audit_rates("b", set1_b.tpr, set1_b.fpr, prev_b)

    calibration = a.set3.calibration

    def fpr_for(prev: float) -> float:
        return (calibration - tpr) * prev / (1.0 - prev)

    prev_b = _draw_prevalence_apart(rng, prev_a, lambda prev: MIN_FPR <= fpr_for(prev) < 1.0)
    if prev_b is None:
        return None
    return a, audit_rates("b", tpr, fpr_for(prev_b), prev_b)


def _draw_prevalences(rng) -> Tuple[float, float]:
    """Two prevalences at least MIN_PREVALENCE_GAP apart; resamples otherwise."""
    for _ in range(MAX_ATTEMPTS):
        prev_a, prev_b = rng.uniform(*PREVALENCE_RANGE), rng.uniform(*PREVALENCE_RANGE)
        if abs(prev_a - prev_b) >= MIN_PREVALENCE_GAP:
            return float(prev_a), float(prev_b)
        logger.debug("Resampling prevalences %.6f, %.6f", prev_a, prev_b)
    raise DomainError("could not draw two distinct prevalences")


def _draw_prevalence_apart(rng, prev_a: float, accept: Callable[[float], bool]) -> Optional[float]:
    for _ in range(PARTNER_ATTEMPTS):
        prev = float(rng.uniform(*PREVALENCE_RANGE))
        if abs(prev - prev_a) >= MIN_PREVALENCE_GAP and accept(prev):
            return prev
    return None


def _draw_fpr(rng, tpr: float) -> float:
    for _ in range(MAX_ATTEMPTS):
        fpr = float(rng.uniform(0.0, tpr))
        if fpr >= MIN_FPR:
            return fpr
    raise DomainError(f"could not draw an fpr below {tpr}")


def _partition(trials: int, workers: int) -> List[range]:
    bounds = np.linspace(0, trials, min(workers, trials) + 1).astype(int)
    return [range(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
