"""Seeded synthetic datasets with group-specific prevalences."""

import io
import logging
from pathlib import Path
from typing import List, Optional, Sequence, TextIO, Union

import numpy as np
import pandas as pd

from fairkit.audit.models import SyntheticGroup, SyntheticSpec
from fairkit.config import settings
from fairkit.metrics.models import OutcomeRecord
from fairkit.rng import resolve_seed, stream

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("group", "y", "pred", "score")


def generate(spec: SyntheticSpec, seed: Optional[int] = None) -> List[OutcomeRecord]:
    """Draw records for every group of ``spec``.

    Group ``i`` draws from the ``(seed, i)`` stream: outcomes are Bernoulli
    at the group's prevalence, scores are Beta given the outcome, and
    ``pred`` is ``score >= default_threshold``.

    Args:
        spec: Groups to generate
        seed: Overrides ``spec.seed``; falls back to FAIRKIT_SEED, then 0
    """
    seed = resolve_seed(spec.seed if seed is None else seed)
    records: List[OutcomeRecord] = []
    for index, group in enumerate(spec.groups):
        y, scores = _draw_group(group, stream(seed, index))
        pred = scores >= settings.default_threshold
        records.extend(
            OutcomeRecord(y=bool(yi), pred=bool(pi), group=group.name, score=float(si))
            for yi, pi, si in zip(y, pred, scores)
        )
        logger.debug("Group %s: %d records, %d positive", group.name, group.n, int(y.sum()))
    return records


def _draw_group(group: SyntheticGroup, rng: np.random.Generator):
    y = rng.random(group.n) < group.prevalence
    c = group.concentration
    positive = rng.beta(group.positive_mean * c, (1.0 - group.positive_mean) * c, size=group.n)
    negative = rng.beta(group.negative_mean * c, (1.0 - group.negative_mean) * c, size=group.n)
    return y, np.where(y, positive, negative)


def to_frame(records: Sequence[OutcomeRecord]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "group": [r.group for r in records],
            "y": [int(r.y) for r in records],
            "pred": [int(r.pred) for r in records],
            "score": [r.score for r in records],
        },
        columns=list(CSV_COLUMNS),
    )


def write_csv(records: Sequence[OutcomeRecord], out: Union[str, Path, TextIO, None] = None) -> str:
    """Emit records as CSV with round-trippable scores.

    Returns the CSV text; also writes it to ``out`` when given.
    """
    buffer = io.StringIO()
    to_frame(records).to_csv(buffer, index=False, float_format="%.17g", lineterminator="\n")
    text = buffer.getvalue()
    if isinstance(out, (str, Path)):
        Path(out).write_text(text, encoding="utf-8")
    elif out is not None:
        out.write(text)
    return text
