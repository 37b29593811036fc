"""Bundled aggregate fixtures, pinned by SHA-256."""

import hashlib
import logging
from pathlib import Path

from pydantic import ValidationError

from fairkit.audit.models import AggregateFixture
from fairkit.errors import FixtureError

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

FIXTURES = {
    "compas": ("compas_aggregates.json", "bc8adf8b414d868201086a465425e800adbdeff7c083a30b70e43993834b970d"),
}


def load_fixture(name: str) -> AggregateFixture:
    """Load a bundled fixture after checking its checksum.

    Raises:
        FixtureError: unknown name, unreadable file or checksum mismatch
    """
    if name not in FIXTURES:
        raise FixtureError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}")
    filename, expected = FIXTURES[name]
    path = DATA_DIR / filename
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise FixtureError(f"cannot read fixture {path}: {exc}") from exc

    digest = hashlib.sha256(raw).hexdigest()
    if digest != expected:
        raise FixtureError(f"fixture {name!r} checksum mismatch: {digest} != {expected}")
    try:
        fixture = AggregateFixture.model_validate_json(raw)
    except ValidationError as exc:
        raise FixtureError(f"fixture {name!r} is malformed: {exc}") from exc
    logger.debug("Loaded fixture %s (%d groups)", name, len(fixture.groups))
    return fixture
