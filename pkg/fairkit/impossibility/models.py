"""Data models for cross-group incompatibility checks and theorem fuzzing."""

from enum import Enum
from typing import Dict, List, NamedTuple, Optional

from pydantic import BaseModel, ConfigDict, Field

from fairkit.config import settings
from fairkit.metrics.models import MetricSet, PredictorClass


class ComponentMode(str, Enum):
    """How many leading components must match for a set to count as equal."""

    BOTH = "both"
    ANY = "any"


class TolerancePolicy(BaseModel):
    """Tolerances used when comparing probabilities across groups."""

    model_config = ConfigDict(frozen=True)

    eps_rate: float = Field(default_factory=lambda: settings.eps_rate, gt=0.0)
    eps_prev: float = Field(default_factory=lambda: settings.eps_prev, gt=0.0)
    component_mode: ComponentMode = ComponentMode.BOTH


class Finding(BaseModel):
    """A gap in ``target_set`` observed while ``source_set`` is equal."""

    model_config = ConfigDict(frozen=True)

    source_set: MetricSet
    target_set: MetricSet
    component: str
    gap: float


class IncompatibilityReport(BaseModel):
    """Which metric sets two groups share, and the gaps forced elsewhere."""

    group_a: str
    group_b: str
    prevalence_differs: bool
    klass_a: Optional[PredictorClass] = None
    klass_b: Optional[PredictorClass] = None
    set1_equal: Optional[bool] = None
    set2_equal: Optional[bool] = None
    set3_equal: Optional[bool] = None
    forced: List[Finding] = Field(default_factory=list)
    component_gaps: Dict[str, float] = Field(default_factory=dict)
    component_equal: Dict[str, bool] = Field(default_factory=dict)
    theorem_violated: bool = False


class GapsFromSet1(NamedTuple):
    """Gaps forced in Sets 3 and 2 when Set 1 is shared."""

    cal_gap: float
    ppv_gap: float
    for_gap: float


class GapsFromSet2(NamedTuple):
    """Gaps forced in Sets 3 and 1 when Set 2 is shared."""

    cal_gap: float
    tpr_gap: float
    fpr_gap: float


class SweepPoint(BaseModel):
    """Forced gaps after shrinking both error terms by ``scale``."""

    scale: float
    tpr: float
    fpr: float
    cal_gap: float
    ppv_gap: float
    for_gap: float


class PerfectCheck(BaseModel):
    """Whether each measure is equal across two perfect predictors."""

    prev_a: float
    prev_b: float
    values_a: Dict[str, float]
    values_b: Dict[str, float]
    passes: Dict[str, bool]


class FuzzInstance(BaseModel):
    """One sampled theorem instance and its outcome."""

    trial: int
    source_set: MetricSet
    prev_a: float
    prev_b: float
    rates_a: Dict[str, float]
    rates_b: Dict[str, float]
    gaps: Dict[str, float]
    violated: bool


class FuzzReport(BaseModel):
    """Outcome of a theorem fuzzing run."""

    trials: int
    violations: int
    seed: int
    by_source: Dict[str, int] = Field(default_factory=dict)
    examples: List[FuzzInstance] = Field(default_factory=list)
