"""Proportion hypothesis tests."""

from fairkit.stats.models import TestMethod, TestResult
from fairkit.stats.proportions import (
    exact_binomial,
    normal_cdf,
    normal_sf,
    one_sample_proportion_z,
    two_proportion_z,
)
