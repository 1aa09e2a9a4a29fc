"""Planned versus realized search cost in units of one full training run."""

import math
from dataclasses import asdict, dataclass
from typing import Any, Optional


@dataclass
class LedgerEntry:
    round: int
    config_id: int
    planned: float
    realized: float
    status: str

    def to_dict(self) -> dict:
        return asdict(self)


class BudgetLedger:
    """Accumulates the relative cost of every trial against the budget B.

    The final full-fidelity run is recorded separately and never counts
    toward B.
    """

    def __init__(self, budget: float):
        self.budget = budget
        self.entries: list[LedgerEntry] = []
        self.final_run: Optional[dict[str, Any]] = None

    def record(
        self, round: int, config_id: int, planned: float, realized: float, status: str
    ) -> LedgerEntry:
        entry = LedgerEntry(round, config_id, planned, realized, status)
        self.entries.append(entry)
        return entry

    def record_final_run(self, config_id: int, cost: float = 1.0) -> None:
        self.final_run = {"config_id": config_id, "cost": cost, "excluded_from_budget": True}

    @property
    def planned_total(self) -> float:
        return math.fsum(e.planned for e in self.entries)

    @property
    def realized_total(self) -> float:
        return math.fsum(e.realized for e in self.entries)

    def round_total(self, round: int) -> float:
        return math.fsum(e.realized for e in self.entries if e.round == round)

    def within_budget(self, slack: float = 1e-9) -> bool:
        return self.realized_total <= self.budget + slack

    def get_status(self) -> dict[str, Any]:
        """Budget summary for progress lines and the ledger file."""
        return {
            "budget": self.budget,
            "planned_total": self.planned_total,
            "realized_total": self.realized_total,
            "remaining": self.budget - self.realized_total,
            "budget_used_percent": 100.0 * self.realized_total / self.budget,
            "trials": len(self.entries),
            "failed_trials": sum(1 for e in self.entries if e.status == "failed"),
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            **self.get_status(),
            "entries": [e.to_dict() for e in self.entries],
            "final_run": self.final_run,
        }
