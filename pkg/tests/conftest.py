"""Shared fixtures and hypothesis profiles."""

import os

import pytest
from hypothesis import HealthCheck, Verbosity, settings

from fairkit.audit.models import SyntheticSpec
from fairkit.audit.synthetic import generate
from fairkit.metrics.models import ConfusionCounts, OutcomeRecord

settings.register_profile(
    "ci", max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("dev", max_examples=60, deadline=None)
settings.register_profile("debug", max_examples=10, deadline=None, verbosity=Verbosity.verbose)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))


@pytest.fixture
def fallible_counts():
    """40 TP, 10 FP, 20 FN, 30 TN."""
    return ConfusionCounts(tp=40, fp=10, fn=20, tn=30)


@pytest.fixture(scope="session")
def demo_records():
    """Two-group demo data, 10k records per group, prevalences 0.5 / 0.25."""
    return generate(SyntheticSpec.demo(), seed=7)


@pytest.fixture
def make_records():
    """Build records from (group, y, score) triples; pred is score >= 0.5."""

    def build(rows):
        return [OutcomeRecord(group=g, y=bool(y), pred=s >= 0.5, score=s) for g, y, s in rows]

    return build


@pytest.fixture
def write_file(tmp_path):
    def write(text, name="data.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write
