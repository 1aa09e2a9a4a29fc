"""Successive-halving search over reduced graphs and epochs."""

from .models import RoundPlan, RoundSummary, SearchParams, SearchSchedule, TrialResult, Variant
from .schedule import num_rounds, plan_schedule, survivor_counts, trial_cost
from .ledger import BudgetLedger, LedgerEntry
from .trial_log import TrialLogger, TrialRecord, read_trial_log
from .runner import (
    FinalResult,
    SearchResult,
    derive_seed,
    final_train,
    realized_cost,
    round_split,
    run_search,
    run_trial,
    select_survivors,
)

__all__ = [
    "RoundPlan",
    "RoundSummary",
    "SearchParams",
    "SearchSchedule",
    "TrialResult",
    "Variant",
    "num_rounds",
    "plan_schedule",
    "survivor_counts",
    "trial_cost",
    "BudgetLedger",
    "LedgerEntry",
    "TrialLogger",
    "TrialRecord",
    "read_trial_log",
    "FinalResult",
    "SearchResult",
    "derive_seed",
    "final_train",
    "realized_cost",
    "round_split",
    "run_search",
    "run_trial",
    "select_survivors",
]
