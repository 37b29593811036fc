"""Ingestion, fixtures, synthetic data and report rendering."""

from fairkit.audit.fixtures import load_fixture
from fairkit.audit.ingest import ingest_csv
from fairkit.audit.models import (
    AggregateFixture,
    AuditReport,
    EqualizeReport,
    SchemaConfig,
    SelftestReport,
    SyntheticGroup,
    SyntheticSpec,
)
from fairkit.audit.report import audit, to_json, to_markdown
from fairkit.audit.synthetic import generate, write_csv
