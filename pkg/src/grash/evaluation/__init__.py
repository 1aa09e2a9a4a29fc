"""Entity-ranking evaluation."""

from .ranking import HITS_AT, FilterIndex, RankingReport, evaluate, filtered_rank

__all__ = ["HITS_AT", "FilterIndex", "RankingReport", "evaluate", "filtered_rank"]
