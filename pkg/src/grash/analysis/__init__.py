"""Transferability and round-count studies."""

from .correlation import (
    TECHNIQUES,
    CorrelationReport,
    format_table,
    spearman,
    transferability_sweep,
)
from .rounds import RoundCountResult, round_count_study

__all__ = [
    "TECHNIQUES",
    "CorrelationReport",
    "format_table",
    "spearman",
    "transferability_sweep",
    "RoundCountResult",
    "round_count_study",
]
