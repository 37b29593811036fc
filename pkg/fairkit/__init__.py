"""Group fairness audits and the mutual exclusivity of fairness criteria."""

__version__ = "0.3.0"
