"""One-sample, exact binomial and two-proportion tests.

All p-values are two-sided. The z tests take the tail from the standard
normal survival function, so p stays accurate far into the tail instead of
collapsing to ``1 - 1``.
"""

import logging
import math

import numpy as np
from scipy import special, stats

from fairkit.errors import DomainError
from fairkit.stats.models import TestMethod, TestResult

logger = logging.getLogger(__name__)

MAX_EXACT_N = 1_000_000
# relative slack when comparing a point mass to the observed one
EXACT_RELATIVE_TOLERANCE = 1e-7


def normal_cdf(z: float) -> float:
    """Standard normal CDF."""
    return float(special.ndtr(z))


def normal_sf(z: float) -> float:
    """Standard normal survival function, 1 - CDF without cancellation."""
    return float(stats.norm.sf(z))


def one_sample_proportion_z(k: int, n: int, p0: float, continuity: bool = False) -> TestResult:
    """Test an observed count ``k`` of ``n`` against the null proportion ``p0``.

    Args:
        k: Observed successes
        n: Trials
        p0: Null proportion, strictly between 0 and 1
        continuity: Shrink |k/n - p0| by 1/(2n) before standardizing

    Returns:
        TestResult with z = (k/n - p0) / sqrt(p0 (1 - p0) / n)
    """
    _check_count(k, n)
    if not 0.0 < p0 < 1.0:
        raise DomainError(f"p0 must lie in (0, 1), got {p0}")

    diff = k / n - p0
    if continuity:
        diff = math.copysign(max(0.0, abs(diff) - 0.5 / n), diff)
    z = diff / math.sqrt(p0 * (1.0 - p0) / n)
    return TestResult(
        statistic=z,
        p_two_sided=_two_sided(z),
        method=TestMethod.ONE_SAMPLE_Z,
        continuity=continuity,
        k=k,
        n=n,
        p0=p0,
    )


def exact_binomial(k: int, n: int, p0: float) -> TestResult:
    """Exact two-sided binomial test by the method of small p-values.

    Sums every Binomial(n, p0) point mass no larger than the observed one.
    The masses are kept in log space and summed with ``logsumexp``.
    """
    _check_count(k, n)
    if not 0.0 < p0 < 1.0:
        raise DomainError(f"p0 must lie in (0, 1), got {p0}")
    if n > MAX_EXACT_N:
        raise DomainError(f"exact test supports n <= {MAX_EXACT_N}, got {n}")

    log_pmf = stats.binom.logpmf(np.arange(n + 1), n, p0)
    cutoff = log_pmf[k] + math.log1p(EXACT_RELATIVE_TOLERANCE)
    p = math.exp(special.logsumexp(log_pmf[log_pmf <= cutoff]))
    return TestResult(
        statistic=k / n,
        p_two_sided=min(1.0, p),
        method=TestMethod.EXACT_BINOMIAL,
        k=k,
        n=n,
        p0=p0,
    )


def two_proportion_z(k1: int, n1: int, k2: int, n2: int, continuity: bool = False) -> TestResult:
    """Pooled-variance z test of k1/n1 against k2/n2.

    Raises:
        DomainError: a count is out of range or the pooled proportion is 0 or 1
    """
    _check_count(k1, n1)
    _check_count(k2, n2)
    pooled = (k1 + k2) / (n1 + n2)
    if pooled in (0.0, 1.0):
        raise DomainError(f"pooled proportion is {pooled}; the test is undefined")

    diff = k1 / n1 - k2 / n2
    if continuity:
        diff = math.copysign(max(0.0, abs(diff) - 0.5 * (1.0 / n1 + 1.0 / n2)), diff)
    z = diff / math.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    return TestResult(
        statistic=z,
        p_two_sided=_two_sided(z),
        method=TestMethod.TWO_PROPORTION_Z,
        continuity=continuity,
        k1=k1,
        n1=n1,
        k2=k2,
        n2=n2,
    )


def _two_sided(z: float) -> float:
    return min(1.0, 2.0 * normal_sf(abs(z)))


def _check_count(k: int, n: int) -> None:
    if n <= 0:
        raise DomainError(f"n must be positive, got {n}")
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in [0, n], got k={k}, n={n}")
