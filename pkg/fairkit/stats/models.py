"""Data models for proportion hypothesis tests."""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class TestMethod(str, Enum):
    """Which proportion test produced a result."""

    __test__ = False

    ONE_SAMPLE_Z = "one_sample_z"
    EXACT_BINOMIAL = "exact_binomial"
    TWO_PROPORTION_Z = "two_proportion_z"


class TestResult(BaseModel):
    """Outcome of a proportion test with its inputs echoed back.

    ``statistic`` is the z value for the z tests and k/n for the exact test.
    """

    __test__ = False

    model_config = ConfigDict(frozen=True)

    statistic: float
    p_two_sided: float = Field(ge=0.0, le=1.0)
    method: TestMethod
    continuity: bool = False
    group: Optional[str] = None
    k: Optional[int] = None
    n: Optional[int] = None
    p0: Optional[float] = None
    k1: Optional[int] = None
    n1: Optional[int] = None
    k2: Optional[int] = None
    n2: Optional[int] = None
