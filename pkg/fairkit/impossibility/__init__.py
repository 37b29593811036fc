"""Cross-group incompatibility checks and the theorem fuzzer."""

from fairkit.impossibility.engine import (
    accuracy_sweep,
    assert_no_violation,
    check_pair,
    forced_gaps_from_set1,
    forced_gaps_from_set2,
    perfect_predictor_check,
)
from fairkit.impossibility.fuzz import theorem_fuzz
from fairkit.impossibility.models import (
    ComponentMode,
    FuzzReport,
    IncompatibilityReport,
    TolerancePolicy,
)
