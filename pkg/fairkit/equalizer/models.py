"""Data models for ROC curves and per-group decision rules."""

from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from fairkit.metrics.models import ConfusionCounts, GroupAudit


class MetricId(str, Enum):
    """Metrics a single-target equalization can aim at."""

    TPR = "tpr"
    FPR = "fpr"
    PRED_RATE = "pred_rate"
    CALIBRATION = "calibration"
    PPV = "ppv"
    FOR_RATE = "for_rate"


class OddsObjective(str, Enum):
    """How the shared (fpr, tpr) point is chosen."""

    MATCH_REFERENCE = "match_reference"
    MAX_ACCURACY = "max_accuracy"


class RocPoint(BaseModel):
    """Operating point of the rule ``score >= threshold``."""

    model_config = ConfigDict(frozen=True)

    threshold: float
    fpr: float = Field(ge=0.0, le=1.0)
    tpr: float = Field(ge=0.0, le=1.0)
    counts: ConfusionCounts


class DecisionRule(BaseModel):
    """Per-group rule: use ``t_low`` with probability ``mix``, else ``t_high``."""

    model_config = ConfigDict(frozen=True)

    group: str
    t_low: float
    t_high: float
    mix: float = Field(default=1.0, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def check_order(self):
        if self.t_low > self.t_high:
            raise ValueError("t_low must not exceed t_high")
        return self

    @property
    def deterministic(self) -> bool:
        return self.mix == 1.0 or self.t_low == self.t_high

    @classmethod
    def at(cls, group: str, threshold: float) -> "DecisionRule":
        return cls(group=group, t_low=threshold, t_high=threshold, mix=1.0)


class GroupEqualization(BaseModel):
    """Outcome of equalizing one group against the reference."""

    group: str
    rule: DecisionRule
    target_value: Optional[float] = None
    target_gap: Optional[float] = None
    achieved: bool = True
    metric_gaps: Dict[str, float] = Field(default_factory=dict)
    audit: GroupAudit


class SingleEqualization(BaseModel):
    """Result of :func:`equalize_single`."""

    target: MetricId
    ref_group: str
    ref_threshold: float
    ref_value: float
    groups: List[GroupEqualization]

    @property
    def rules(self) -> Dict[str, DecisionRule]:
        return {g.group: g.rule for g in self.groups}

    @property
    def unachievable(self) -> List[str]:
        return [g.group for g in self.groups if not g.achieved]


class OddsEqualization(BaseModel):
    """Result of :func:`equalize_odds_pair`."""

    objective: OddsObjective
    target: Tuple[float, float]
    rules: Dict[str, DecisionRule]
    expected: Dict[str, Tuple[float, float]]
