"""Audits of record sets or aggregate fixtures, rendered as JSON or Markdown."""

import itertools
import json
import logging
from typing import Dict, List, Optional, Sequence

from jinja2 import Environment, PackageLoader, StrictUndefined
from pydantic import BaseModel

from fairkit import __version__
from fairkit.audit.models import AggregateFixture, AuditReport, ReportMeta
from fairkit.config import settings
from fairkit.errors import DomainError
from fairkit.impossibility.engine import check_pair
from fairkit.impossibility.models import TolerancePolicy
from fairkit.metrics.core import accumulate, audit_counts, audit_totals
from fairkit.metrics.models import GroupAudit, MetricSet, OutcomeRecord
from fairkit.stats.models import TestResult
from fairkit.stats.proportions import exact_binomial, one_sample_proportion_z

logger = logging.getLogger(__name__)

_env = Environment(
    loader=PackageLoader("fairkit.audit", "templates"),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


def audit(
        records: Optional[Sequence[OutcomeRecord]] = None,
        fixture: Optional[AggregateFixture] = None,
        tol: Optional[TolerancePolicy] = None,
        ref_group: Optional[str] = None,
        all_pairs: bool = False,
        continuity: bool = False,
        source: str = "records",
) -> AuditReport:
    """Audit every group and compare groups pairwise.

    Exactly one of ``records`` and ``fixture`` is given. Fixtures carry no
    joint counts, so their audits hold prevalence and Set 3 only.

    Args:
        records: Individual outcome records
        fixture: Aggregate totals per group
        tol: Tolerances for the pairwise checks
        ref_group: Group every other group is compared with; defaults to the
            lexicographically first
        all_pairs: Compare every pair instead of reference vs. others
        continuity: Continuity-correct the one-sample z tests
        source: Label stored in the report metadata

    Returns:
        AuditReport with groups sorted by name
    """
    if (records is None) == (fixture is None):
        raise DomainError("audit needs exactly one of records and fixture")
    tol = tol or TolerancePolicy()

    if fixture is not None:
        audits = [
            audit_totals(name, g.n, g.actual_positive, g.predicted_positive)
            for name, g in sorted(fixture.groups.items())
        ]
        totals = {name: (g.n, g.actual_positive, g.predicted_positive) for name, g in fixture.groups.items()}
        source = f"fixture:{fixture.name}"
    else:
        counts = accumulate(records)
        audits = [audit_counts(name, c) for name, c in sorted(counts.items())]
        totals = {name: (c.total, c.actual_positive, c.predicted_positive) for name, c in counts.items()}
    if not audits:
        raise DomainError("nothing to audit: no groups")

    names = [a.group for a in audits]
    ref_group = ref_group or names[0]
    if ref_group not in names:
        raise DomainError(f"reference group {ref_group!r} not found; groups: {names}")
    by_name = {a.group: a for a in audits}
    if all_pairs:
        pairs = list(itertools.combinations(names, 2))
    else:
        pairs = [(ref_group, name) for name in names if name != ref_group]

    tests: List[TestResult] = []
    for name in names:
        tests.extend(_significance(name, *totals[name], continuity=continuity))

    return AuditReport(
        groups=audits,
        pairs=[check_pair(by_name[a], by_name[b], tol) for a, b in pairs],
        tests=tests,
        meta=ReportMeta(version=__version__, source=source, tolerances=tol, ref_group=ref_group),
    )


def _significance(group: str, total: int, actual_positive: int, predicted_positive: int,
                  continuity: bool) -> List[TestResult]:
    """Prediction rate tested against prevalence as the null proportion."""
    if actual_positive in (0, total):
        logger.warning("Skipping significance tests for group %r: prevalence is %d/%d", group, actual_positive, total)
        return []
    p0 = actual_positive / total
    return [
        result.model_copy(update={"group": group})
        for result in (
            one_sample_proportion_z(predicted_positive, total, p0, continuity=continuity),
            exact_binomial(predicted_positive, total, p0),
        )
    ]


def to_json(report: BaseModel) -> str:
    """Deterministic JSON: sorted keys, two-space indent, full doubles."""
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def to_markdown(report: AuditReport, decimals: Optional[int] = None) -> str:
    """One table per metric set, groups as columns."""
    decimals = settings.report_decimals if decimals is None else decimals
    template = _env.get_template("audit_report.md.j2")
    return template.render(
        report=report,
        groups=[a.group for a in report.groups],
        sections=_sections(report.groups),
        num=lambda value: "n/a" if value is None else f"{value:.{decimals}f}",
        pvalue=lambda value: f"{value:.4g}",
    )


def _sections(audits: List[GroupAudit]) -> List[Dict]:
    sections = [{"title": "Base rates", "label": None, "names": ["prevalence"]}]
    for metric_set in MetricSet:
        names = list(metric_set.components)
        if metric_set is MetricSet.SET3:
            names.append("pred_rate")
        sections.append({"title": metric_set.title, "label": metric_set.criterion, "names": names})
    for section in sections:
        section["rows"] = [(name, [a.metric(name) for a in audits]) for name in section.pop("names")]
    return sections
