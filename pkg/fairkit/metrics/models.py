"""Data models for confusion counts and the three metric sets."""

from enum import Enum
from typing import Annotated, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

IDENTITY_TOLERANCE = 1e-12

Probability = Annotated[float, Field(ge=0.0, le=1.0)]


class MetricSet(str, Enum):
    """The three mutually exclusive metric sets.

    Numbered after the measures: Set1 holds rates given the outcome, Set2
    rates given the prediction. ``criterion`` is the name the set usually
    goes by when it is imposed as a fairness constraint.
    """

    SET1 = "set1"
    SET2 = "set2"
    SET3 = "set3"

    @property
    def components(self) -> tuple:
        return _SET_COMPONENTS[self]

    @property
    def title(self) -> str:
        return _SET_TITLES[self]

    @property
    def criterion(self) -> str:
        return _CRITERIA[self]


_SET_COMPONENTS = {
    MetricSet.SET1: ("tpr", "fpr", "fnr", "tnr"),
    MetricSet.SET2: ("ppv", "for_rate", "fdr", "npv"),
    MetricSet.SET3: ("calibration",),
}
_SET_TITLES = {
    MetricSet.SET1: "Set 1: error rates given the outcome (TPR, FPR, FNR, TNR)",
    MetricSet.SET2: "Set 2: outcome rates given the prediction (PPV, FOR, FDR, NPV)",
    MetricSet.SET3: "Set 3: calibration P(Pred)/P(Y)",
}
_CRITERIA = {
    MetricSet.SET1: "error-rate balance (equalized odds)",
    MetricSet.SET2: "predictive parity",
    MetricSet.SET3: "overall calibration",
}


class PredictorClass(str, Enum):
    """How a predictor behaves inside one group."""

    PERFECT = "Perfect"
    TRIVIAL_ALWAYS_POSITIVE = "TrivialAlwaysPositive"
    TRIVIAL_ALWAYS_NEGATIVE = "TrivialAlwaysNegative"
    FALLIBLE = "Fallible"


class OutcomeRecord(BaseModel):
    """One individual: actual outcome, prediction, group and optional score."""

    model_config = ConfigDict(frozen=True)

    y: bool
    pred: bool
    group: str
    score: Optional[float] = Field(default=None, ge=0.0, le=1.0)


class ConfusionCounts(BaseModel):
    """Exact integer confusion counts for one group."""

    model_config = ConfigDict(frozen=True)

    tp: int = Field(default=0, ge=0)
    fp: int = Field(default=0, ge=0)
    fn: int = Field(default=0, ge=0)
    tn: int = Field(default=0, ge=0)

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        # Cell-wise merge; associative and commutative.
        return ConfusionCounts(
            tp=self.tp + other.tp,
            fp=self.fp + other.fp,
            fn=self.fn + other.fn,
            tn=self.tn + other.tn,
        )

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def actual_positive(self) -> int:
        return self.tp + self.fn

    @property
    def actual_negative(self) -> int:
        return self.fp + self.tn

    @property
    def predicted_positive(self) -> int:
        return self.tp + self.fp

    @property
    def predicted_negative(self) -> int:
        return self.fn + self.tn

    @property
    def commits_both_errors(self) -> bool:
        """True when false positives and false negatives both occur."""
        return self.fp > 0 and self.fn > 0


class Set1Metrics(BaseModel):
    """P(Pred|Y), P(Pred|not Y), P(not Pred|Y), P(not Pred|not Y)."""

    model_config = ConfigDict(frozen=True)

    tpr: Probability
    fpr: Probability
    fnr: Probability
    tnr: Probability

    @model_validator(mode="after")
    def check_complements(self):
        if abs(self.tpr + self.fnr - 1.0) > IDENTITY_TOLERANCE:
            raise ValueError("tpr + fnr must equal 1")
        if abs(self.fpr + self.tnr - 1.0) > IDENTITY_TOLERANCE:
            raise ValueError("fpr + tnr must equal 1")
        return self


class Set2Metrics(BaseModel):
    """P(Y|Pred), P(Y|not Pred), P(not Y|Pred), P(not Y|not Pred)."""

    model_config = ConfigDict(frozen=True)

    ppv: Probability
    for_rate: Probability
    fdr: Probability
    npv: Probability

    @model_validator(mode="after")
    def check_complements(self):
        if abs(self.ppv + self.fdr - 1.0) > IDENTITY_TOLERANCE:
            raise ValueError("ppv + fdr must equal 1")
        if abs(self.for_rate + self.npv - 1.0) > IDENTITY_TOLERANCE:
            raise ValueError("for_rate + npv must equal 1")
        return self


class Set3Metric(BaseModel):
    """Calibration in the overall-ratio sense: P(Pred) / P(Y)."""

    model_config = ConfigDict(frozen=True)

    calibration: float = Field(ge=0.0)
    pred_rate: Probability
    prevalence: Probability

    @model_validator(mode="after")
    def check_ratio(self):
        if self.prevalence > 0 and abs(self.calibration * self.prevalence - self.pred_rate) > IDENTITY_TOLERANCE:
            raise ValueError("calibration * prevalence must equal pred_rate")
        return self


class GroupAudit(BaseModel):
    """Per-group prevalence, the three metric sets and the predictor class.

    ``counts`` is absent for audits built from aggregate totals or directly
    from rates; ``klass`` is absent when joint counts are unknown.
    """

    model_config = ConfigDict(frozen=True)

    group: str
    prevalence: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    counts: Optional[ConfusionCounts] = None
    set1: Optional[Set1Metrics] = None
    set2: Optional[Set2Metrics] = None
    set3: Optional[Set3Metric] = None
    klass: Optional[PredictorClass] = None
    commits_both_errors: bool = False

    @model_validator(mode="after")
    def check_presence(self):
        c = self.counts
        if c is None:
            return self
        if (self.set1 is None) != (c.actual_positive == 0 or c.actual_negative == 0):
            raise ValueError("set1 must be present exactly when both outcome classes occur")
        if (self.set2 is None) != (c.predicted_positive == 0 or c.predicted_negative == 0):
            raise ValueError("set2 must be present exactly when both predictions occur")
        if (self.set3 is None) != (c.actual_positive == 0):
            raise ValueError("set3 must be present exactly when actual positives occur")
        return self

    def metric(self, name: str) -> Optional[float]:
        """Look up any set metric (or pred_rate/prevalence) by name."""
        for part in (self.set1, self.set2, self.set3):
            if part is not None and name in type(part).model_fields:
                return getattr(part, name)
        if name == "prevalence":
            return self.prevalence
        return None
