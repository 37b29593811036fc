"""Data models for CSV schemas, fixtures, synthetic specs and reports."""

from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from fairkit.equalizer.models import OddsEqualization, SingleEqualization
from fairkit.errors import FileError, SchemaError, SpecError
from fairkit.impossibility.models import (
    FuzzReport,
    IncompatibilityReport,
    PerfectCheck,
    SweepPoint,
    TolerancePolicy,
)
from fairkit.metrics.models import GroupAudit
from fairkit.stats.models import TestResult

TRUE_TOKENS = ("1", "true", "yes", "y", "t")
FALSE_TOKENS = ("0", "false", "no", "n", "f")


class SchemaConfig(BaseModel):
    """How to read outcome records out of a CSV file.

    ``group`` and ``outcome`` are required. At least one of ``prediction``
    and ``score`` must be named: audits need predictions, equalization needs
    scores. Tokens are matched case-insensitively after stripping.
    """

    model_config = ConfigDict(frozen=True)

    group: str = "group"
    outcome: str = "y"
    prediction: Optional[str] = "pred"
    score: Optional[str] = "score"
    outcome_true: Tuple[str, ...] = TRUE_TOKENS
    outcome_false: Tuple[str, ...] = FALSE_TOKENS
    prediction_true: Tuple[str, ...] = TRUE_TOKENS
    prediction_false: Tuple[str, ...] = FALSE_TOKENS
    score_scale: float = Field(default=1.0, gt=0.0, description="Raw scores are divided by this")
    delimiter: str = Field(default=",", min_length=1, max_length=1)
    header: bool = True

    @model_validator(mode="after")
    def check_columns(self):
        if self.prediction is None and self.score is None:
            raise ValueError("a schema needs a prediction column, a score column, or both")
        return self

    @classmethod
    def preset(cls, name: str) -> "SchemaConfig":
        """Named schema for a well-known file layout."""
        if name not in SCHEMA_PRESETS:
            raise SchemaError(f"unknown schema preset {name!r}; known: {sorted(SCHEMA_PRESETS)}")
        return cls(**SCHEMA_PRESETS[name])

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "SchemaConfig":
        return _load_json_model(cls, path, SchemaError)


SCHEMA_PRESETS: Dict[str, dict] = {
    # ProPublica compas-scores-two-years.csv; Medium and High count as high risk
    "propublica": {
        "group": "race",
        "outcome": "two_year_recid",
        "prediction": "score_text",
        "score": "decile_score",
        "prediction_true": ("medium", "high"),
        "prediction_false": ("low",),
        "score_scale": 10.0,
    },
}


class AggregateGroup(BaseModel):
    """Per-group totals; no joint confusion counts."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    actual_positive: int = Field(ge=0)
    predicted_positive: int = Field(ge=0)

    @model_validator(mode="after")
    def check_totals(self):
        if self.actual_positive > self.n or self.predicted_positive > self.n:
            raise ValueError("actual_positive and predicted_positive must not exceed n")
        return self


class AggregateFixture(BaseModel):
    """A bundled aggregate dataset."""

    name: str
    source: str = ""
    groups: Dict[str, AggregateGroup]


class SyntheticGroup(BaseModel):
    """One group of a synthetic dataset.

    Scores are Beta-distributed with the given mean and concentration
    (alpha + beta), separately for actual positives and negatives.
    """

    name: str = Field(min_length=1)
    n: int = Field(ge=0)
    prevalence: float = Field(gt=0.0, lt=1.0)
    positive_mean: float = Field(default=0.7, gt=0.0, lt=1.0)
    negative_mean: float = Field(default=0.3, gt=0.0, lt=1.0)
    concentration: float = Field(default=10.0, gt=0.0)


class SyntheticSpec(BaseModel):
    """Groups to generate and the seed that fixes them."""

    groups: List[SyntheticGroup] = Field(min_length=1)
    seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64)

    @model_validator(mode="after")
    def check_names(self):
        names = [g.name for g in self.groups]
        if len(set(names)) != len(names):
            raise ValueError("group names must be unique")
        return self

    @classmethod
    def demo(cls, n: int = 10_000, seed: Optional[int] = None) -> "SyntheticSpec":
        """Two groups with equal score distributions and prevalences 0.5 / 0.25."""
        return cls(
            groups=[
                SyntheticGroup(name="A", n=n, prevalence=0.5),
                SyntheticGroup(name="B", n=n, prevalence=0.25),
            ],
            seed=seed,
        )

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "SyntheticSpec":
        return _load_json_model(cls, path, SpecError)


class ReportMeta(BaseModel):
    """Provenance of a report."""

    version: str
    source: str
    seed: Optional[int] = None
    tolerances: TolerancePolicy
    ref_group: Optional[str] = None


class AuditReport(BaseModel):
    """Per-group audits, pairwise checks and significance tests."""

    groups: List[GroupAudit]
    pairs: List[IncompatibilityReport] = Field(default_factory=list)
    tests: List[TestResult] = Field(default_factory=list)
    meta: ReportMeta

    @property
    def theorem_violated(self) -> bool:
        return any(pair.theorem_violated for pair in self.pairs)


class EqualizeReport(BaseModel):
    """Decision rules, the audits they produce and the resulting pair checks."""

    single: Optional[SingleEqualization] = None
    odds: Optional[OddsEqualization] = None
    evaluated: Dict[str, GroupAudit]
    pairs: List[IncompatibilityReport] = Field(default_factory=list)
    meta: ReportMeta

    @property
    def theorem_violated(self) -> bool:
        return any(pair.theorem_violated for pair in self.pairs)


class SelftestReport(BaseModel):
    """Theorem fuzz results plus the perfect-predictor and accuracy checks."""

    fuzz: FuzzReport
    perfect: PerfectCheck
    sweep: List[SweepPoint] = Field(default_factory=list)


def _load_json_model(cls, path: Union[str, Path], error: type):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileError(f"cannot read {path}: {exc}") from exc
    try:
        return cls.model_validate_json(text)
    except ValidationError as exc:
        raise error(f"invalid {cls.__name__} in {path}: {exc}") from exc
