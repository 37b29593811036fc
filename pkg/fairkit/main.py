"""Command-line interface for fairkit.

Subcommands: ``audit``, ``equalize``, ``selftest`` and ``generate``. Reports
go to stdout (or ``--out``), diagnostics to stderr. Exit codes: 0 success,
1 input or usage error, 2 when a theorem tripwire fires or the self-test
finds violations. A record is predicted positive iff score >= threshold.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from fairkit import __version__
from fairkit.audit import (
    EqualizeReport,
    SchemaConfig,
    SelftestReport,
    SyntheticSpec,
    audit,
    generate,
    ingest_csv,
    load_fixture,
    to_json,
    to_markdown,
    write_csv,
)
from fairkit.audit.fixtures import FIXTURES
from fairkit.audit.models import ReportMeta
from fairkit.config import configure_logging, settings, validate_config
from fairkit.equalizer import MetricId, OddsObjective, equalize_odds_pair, equalize_single, evaluate_rule
from fairkit.errors import DomainError, FairkitError
from fairkit.impossibility import (
    ComponentMode,
    IncompatibilityReport,
    TolerancePolicy,
    accuracy_sweep,
    assert_no_violation,
    check_pair,
    perfect_predictor_check,
    theorem_fuzz,
)
from fairkit.metrics.models import OutcomeRecord
from fairkit.rng import resolve_seed

logger = logging.getLogger(__name__)

EQUALIZE_TOLERANCE = 1e-3
PERFECT_PREVALENCES = (0.5, 0.25)
SWEEP_INSTANCE = (0.8, 0.2, 0.5, 0.25)
SWEEP_SCALES = (1.0, 0.5, 0.25, 0.1, 0.01)


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that prints help and exits 1 on usage errors."""

    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def build_parser() -> CliParser:
    parser = CliParser(prog="fairkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"fairkit {__version__}")
    parser.add_argument("--log-level", type=str.upper, default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                        help="Logging level (default: FAIRKIT_LOG_LEVEL or WARNING)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("audit", help="Audit groups against the three metric sets")
    _add_input_args(p, allow_fixture=True)
    p.add_argument("--tolerance", type=_positive_float, default=None, help="Absolute tolerance for equal rates")
    p.add_argument("--component-mode", choices=[m.value for m in ComponentMode], default=ComponentMode.BOTH.value)
    p.add_argument("--ref-group", default=None, help="Reference group (default: lexicographically first)")
    p.add_argument("--all-pairs", action="store_true", help="Compare every pair of groups")
    p.add_argument("--continuity", action="store_true", help="Continuity-correct the z tests")
    p.add_argument("--format", choices=["json", "markdown"], default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_audit)

    p = sub.add_parser("equalize", help="Equalize one metric, or TPR and FPR together, across groups")
    _add_input_args(p, allow_fixture=False)
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--target", choices=[m.value for m in MetricId])
    target.add_argument("--odds", nargs="?", const=OddsObjective.MATCH_REFERENCE.value,
                        choices=[o.value for o in OddsObjective])
    p.add_argument("--ref-group", default=None, help="Group kept at its default threshold")
    p.add_argument("--group", default=None, help="Second group for --odds (default: first other group)")
    p.add_argument("--ref-threshold", type=float, default=None)
    p.add_argument("--tolerance", type=_positive_float, default=EQUALIZE_TOLERANCE)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_equalize)

    p = sub.add_parser("selftest", help="Fuzz the mutual-exclusivity theorem")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--examples", type=int, default=None, help="Non-violating instances to echo")
    p.add_argument("--sweep", action="store_true", help="Add the accuracy sweep")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_selftest)

    p = sub.add_parser("generate", help="Write a seeded synthetic dataset as CSV")
    p.add_argument("--spec", default=None, help="SyntheticSpec JSON (default: two-group demo)")
    p.add_argument("--n", type=int, default=10_000, help="Records per group for the demo spec")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_generate)
    return parser


def _add_input_args(p: argparse.ArgumentParser, allow_fixture: bool) -> None:
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="CSV file of outcome records")
    if allow_fixture:
        source.add_argument("--fixture", choices=sorted(FIXTURES))
    source.add_argument("--demo", action="store_true", help="Use the seeded two-group synthetic dataset")
    schema = p.add_mutually_exclusive_group()
    schema.add_argument("--schema", help="SchemaConfig JSON file")
    schema.add_argument("--preset", help="Named schema preset, e.g. propublica")
    p.add_argument("--skip-bad-rows", action="store_true")
    p.add_argument("--seed", type=int, default=None)


def main(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1

    configure_logging(args.log_level)
    validate_config()
    try:
        return args.handler(args)
    except FairkitError as exc:
        logger.error("%s: %s", type(exc).__name__, exc.message)
        return exc.exit_code


def _cmd_audit(args) -> int:
    tol = TolerancePolicy(
        eps_rate=settings.eps_rate if args.tolerance is None else args.tolerance,
        component_mode=ComponentMode(args.component_mode),
    )
    options = dict(tol=tol, ref_group=args.ref_group, all_pairs=args.all_pairs, continuity=args.continuity)
    if args.fixture:
        report = audit(fixture=load_fixture(args.fixture), **options)
    else:
        report = audit(records=_load_records(args), source=args.input or "demo", **options)
    if args.demo:
        report.meta.seed = resolve_seed(args.seed)

    _emit(to_markdown(report) if args.format == "markdown" else to_json(report), args.out)
    return _check_tripwire(report.pairs)


def _cmd_equalize(args) -> int:
    records = _load_records(args)
    groups = sorted({r.group for r in records})
    if len(groups) < 2:
        raise DomainError(f"equalization needs at least two groups, got {groups}")
    ref = args.ref_group or groups[0]
    if ref not in groups:
        raise DomainError(f"reference group {ref!r} not found; groups: {groups}")
    tol = TolerancePolicy(eps_rate=args.tolerance)
    seed = resolve_seed(args.seed)

    single = odds = None
    if args.odds:
        other = args.group or next(g for g in groups if g != ref)
        odds = equalize_odds_pair(records, ref, other, OddsObjective(args.odds), args.ref_threshold)
        rules = odds.rules
    else:
        single = equalize_single(records, ref, None, MetricId(args.target), tol, args.ref_threshold)
        rules = single.rules

    evaluated = evaluate_rule([r for r in records if r.group in rules], rules, seed)
    report = EqualizeReport(
        single=single,
        odds=odds,
        evaluated=evaluated,
        pairs=[check_pair(evaluated[ref], evaluated[g], tol) for g in sorted(evaluated) if g != ref],
        meta=ReportMeta(version=__version__, source=args.input or "demo", seed=seed, tolerances=tol, ref_group=ref),
    )
    _emit(to_json(report), args.out)
    return _check_tripwire(report.pairs)


def _cmd_selftest(args) -> int:
    trials = settings.fuzz_trials if args.trials is None else args.trials
    seed = resolve_seed(args.seed)
    fuzz = theorem_fuzz(trials, seed, workers=args.workers, max_examples=args.examples)
    report = SelftestReport(
        fuzz=fuzz,
        perfect=perfect_predictor_check(*PERFECT_PREVALENCES),
        sweep=accuracy_sweep(*SWEEP_INSTANCE, SWEEP_SCALES) if args.sweep else [],
    )
    _emit(to_json(report), args.out)
    return 2 if fuzz.violations else 0


def _cmd_generate(args) -> int:
    spec = SyntheticSpec.from_file(args.spec) if args.spec else SyntheticSpec.demo(n=args.n)
    records = generate(spec, seed=args.seed)
    if args.out:
        write_csv(records, args.out)
    else:
        write_csv(records, sys.stdout)
    logger.info("Generated %d records", len(records))
    return 0


def _load_records(args) -> List[OutcomeRecord]:
    if args.demo:
        return generate(SyntheticSpec.demo(), seed=resolve_seed(args.seed))
    if args.preset:
        schema = SchemaConfig.preset(args.preset)
    elif args.schema:
        schema = SchemaConfig.from_file(args.schema)
    else:
        schema = SchemaConfig()
    return ingest_csv(args.input, schema, skip_bad_rows=args.skip_bad_rows)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _check_tripwire(pairs: List[IncompatibilityReport]) -> int:
    """Raise TheoremViolation (exit 2) on the first pair that fired."""
    for pair in pairs:
        assert_no_violation(pair)
    return 0


if __name__ == "__main__":
    sys.exit(main())
