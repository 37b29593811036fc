"""CSV ingestion into outcome records."""

import logging
import math
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import pandas as pd

from fairkit.audit.models import SchemaConfig
from fairkit.config import settings
from fairkit.errors import FileError, ParseError, SchemaError
from fairkit.metrics.models import OutcomeRecord

logger = logging.getLogger(__name__)

OVERLONG_MARKER = "\x00fields:"


def ingest_csv(
        path: Union[str, Path],
        schema: Optional[SchemaConfig] = None,
        skip_bad_rows: bool = False,
) -> List[OutcomeRecord]:
    """Read one OutcomeRecord per data row of a CSV file.

    Without a prediction column, ``pred`` is ``score >= default_threshold``.
    Row numbers in errors are 1-based file lines.

    Args:
        path: CSV file (UTF-8)
        schema: Column mapping; defaults to ``group,y,pred,score``
        skip_bad_rows: Drop malformed rows with a warning instead of failing

    Returns:
        Records in file order

    Raises:
        FileError: missing or unreadable file
        SchemaError: a named column is absent
        ParseError: malformed rows and ``skip_bad_rows`` is off
    """
    schema = schema or SchemaConfig()
    frame = _read(path, schema)

    required = [schema.group, schema.outcome]
    optional = [c for c in (schema.prediction, schema.score) if c is not None]
    for column in required:
        if column not in frame.columns:
            raise SchemaError(f"column {column!r} not found in {path}", column=column)
    present = [c for c in optional if c in frame.columns]
    if not present:
        raise SchemaError(
            f"neither prediction nor score column found in {path}: {optional}",
            column=optional[0],
        )
    prediction = schema.prediction if schema.prediction in frame.columns else None
    score = schema.score if schema.score in frame.columns else None

    first_line = 2 if schema.header else 1
    records: List[OutcomeRecord] = []
    bad: List[Tuple[int, str]] = []
    columns = [frame[schema.group], frame[schema.outcome]]
    columns.append(frame[prediction] if prediction else [None] * len(frame))
    columns.append(frame[score] if score else [None] * len(frame))
    for i, (group, y, pred, raw_score) in enumerate(zip(*columns)):
        try:
            records.append(_parse_row(schema, group, y, pred, raw_score))
        except ValueError as exc:
            bad.append((first_line + i, str(exc)))

    if bad:
        if not skip_bad_rows:
            raise ParseError(bad)
        logger.warning("Skipped %d malformed row(s) in %s; first at line %d: %s", len(bad), path, *bad[0])
    logger.info("Read %d records from %s", len(records), path)
    return records


def _read(path: Union[str, Path], schema: SchemaConfig) -> pd.DataFrame:
    if not Path(path).is_file():
        raise FileError(f"input file not found: {path}")
    options = dict(
        sep=schema.delimiter,
        dtype=str,
        keep_default_na=False,
        encoding="utf-8",
        skipinitialspace=True,
        engine="python",
    )
    try:
        width = len(pd.read_csv(path, header=None, nrows=1, **options).columns)
        # over-long rows stay in place as marker rows so row numbers hold
        frame = pd.read_csv(
            path,
            header=0 if schema.header else None,
            on_bad_lines=lambda fields: [f"{OVERLONG_MARKER}{len(fields)}"] * width,
            **options,
        )
    except (OSError, UnicodeDecodeError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise FileError(f"cannot read {path}: {exc}") from exc
    frame.columns = [str(c).strip() for c in frame.columns]
    return frame.fillna("")


def _parse_row(schema: SchemaConfig, group, y, pred, raw_score) -> OutcomeRecord:
    if group.startswith(OVERLONG_MARKER):
        raise ValueError(f"too many fields ({group[len(OVERLONG_MARKER):]})")
    group = group.strip()
    if not group:
        raise ValueError("empty group")
    outcome = _token(y, schema.outcome_true, schema.outcome_false, "outcome")

    value = None
    if raw_score is not None and raw_score.strip():
        try:
            value = float(raw_score) / schema.score_scale
        except ValueError:
            raise ValueError(f"score {raw_score!r} is not a number") from None
        if math.isnan(value) or not 0.0 <= value <= 1.0:
            raise ValueError(f"score {raw_score.strip()} is out of range [0, 1] after scaling")

    if pred is not None:
        predicted = _token(pred, schema.prediction_true, schema.prediction_false, "prediction")
    elif value is not None:
        predicted = value >= settings.default_threshold
    else:
        raise ValueError("no prediction and no score")
    return OutcomeRecord(y=outcome, pred=predicted, group=group, score=value)


def _token(raw: str, true_tokens: Sequence[str], false_tokens: Sequence[str], what: str) -> bool:
    token = raw.strip().casefold()
    if token in (t.casefold() for t in true_tokens):
        return True
    if token in (t.casefold() for t in false_tokens):
        return False
    raise ValueError(f"{what} {raw!r} is not one of {list(true_tokens) + list(false_tokens)}")
