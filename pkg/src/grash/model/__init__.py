"""KGE models: ComplEx, TransE and RotatE."""

from .scorers import (
    SCORERS,
    ComplExScorer,
    RotatEScorer,
    Scorer,
    TransEScorer,
    make_scorer,
    reduce_to_shape,
)
from .embedding import (
    EmbeddingModel,
    init_model,
    score,
    score_candidates,
    score_queries,
    validate_model_shape,
)
from .checkpoint import CheckpointHeader, load_checkpoint, save_checkpoint

__all__ = [
    "SCORERS",
    "ComplExScorer",
    "RotatEScorer",
    "Scorer",
    "TransEScorer",
    "make_scorer",
    "reduce_to_shape",
    "EmbeddingModel",
    "init_model",
    "score",
    "score_candidates",
    "score_queries",
    "validate_model_shape",
    "CheckpointHeader",
    "load_checkpoint",
    "save_checkpoint",
]
