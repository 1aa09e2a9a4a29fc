"""Embedding storage, initialization and scoring entry points."""

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ..errors import ModelConfigError
from .scorers import SCORERS, Scorer, make_scorer

Direction = Literal["sp_", "_po"]


@dataclass
class EmbeddingModel:
    """Entity and relation embeddings for one scorer.

    Complex scorers store entities as interleaved (re, im) pairs; RotatE
    relations are ``dim // 2`` phase angles.
    """

    scorer_name: str
    dim: int
    entity_embeddings: np.ndarray
    relation_embeddings: np.ndarray
    p_norm: int = 2
    seed: int = 0
    scorer: Scorer = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.scorer = make_scorer(self.scorer_name, self.p_norm)

    @property
    def num_entities(self) -> int:
        return int(self.entity_embeddings.shape[0])

    @property
    def num_relations(self) -> int:
        return int(self.relation_embeddings.shape[0])

    @property
    def num_values(self) -> int:
        return int(self.entity_embeddings.size + self.relation_embeddings.size)

    def copy(self) -> "EmbeddingModel":
        return EmbeddingModel(
            scorer_name=self.scorer_name,
            dim=self.dim,
            entity_embeddings=self.entity_embeddings.copy(),
            relation_embeddings=self.relation_embeddings.copy(),
            p_norm=self.p_norm,
            seed=self.seed,
        )

    def is_finite(self) -> bool:
        return bool(
            np.isfinite(self.entity_embeddings).all()
            and np.isfinite(self.relation_embeddings).all()
        )


def validate_model_shape(scorer: str, dim: int) -> None:
    """Raise ModelConfigError for an unknown scorer or unusable dimension."""
    if scorer not in SCORERS:
        raise ModelConfigError(f"Unknown scorer '{scorer}'; expected one of {', '.join(SCORERS)}")
    if dim < 2:
        raise ModelConfigError(f"dim must be >= 2, got {dim}")
    if scorer in ("complex", "rotate") and dim % 2:
        raise ModelConfigError(f"{scorer} needs an even dim, got {dim}")


def init_model(
    scorer: str,
    dim: int,
    n_entities: int,
    n_relations: int,
    init_scale: float,
    seed: int,
    p_norm: int = 2,
) -> EmbeddingModel:
    """Draw a fresh model with uniform [-init_scale, init_scale] embeddings.

    RotatE phases are uniform in [0, 2*pi) regardless of ``init_scale``.

    Raises:
        ModelConfigError: On an unknown scorer, bad dim or non-positive scale
    """
    validate_model_shape(scorer, dim)
    if not init_scale > 0:
        raise ModelConfigError(f"init_scale must be > 0, got {init_scale}")

    rng = np.random.default_rng(seed)
    impl = make_scorer(scorer, p_norm)
    entities = rng.uniform(-init_scale, init_scale, size=(n_entities, dim))
    relations = impl.init_relations(rng, n_relations, dim, init_scale)
    return EmbeddingModel(
        scorer_name=scorer,
        dim=dim,
        entity_embeddings=entities,
        relation_embeddings=relations,
        p_norm=p_norm,
        seed=seed,
    )


def score(model: EmbeddingModel, s: int, p: int, o: int) -> float:
    """Score a single triple."""
    return float(
        model.scorer.forward(
            model.entity_embeddings[s],
            model.relation_embeddings[p],
            model.entity_embeddings[o],
        )
    )


def score_queries(
    model: EmbeddingModel, direction: Direction, first: np.ndarray, relations: np.ndarray
) -> np.ndarray:
    """Score a batch of queries against all entities.

    Args:
        model: Model to score with
        direction: ``"sp_"`` replaces the object, ``"_po"`` the subject
        first: (Q,) fixed entity indices (subjects for ``sp_``, objects for ``_po``)
        relations: (Q,) relation indices

    Returns:
        (Q, num_entities) score matrix
    """
    if direction not in ("sp_", "_po"):
        raise ValueError(f"direction must be 'sp_' or '_po', got {direction!r}")
    return model.scorer.candidates(
        model.entity_embeddings[np.asarray(first)],
        model.relation_embeddings[np.asarray(relations)],
        model.entity_embeddings,
        replace_object=direction == "sp_",
    )


def score_candidates(
    model: EmbeddingModel, direction: Direction, fixed: tuple[int, int]
) -> np.ndarray:
    """Scores of every entity substituted into one query.

    ``fixed`` is (s, p) for ``"sp_"`` and (p, o) for ``"_po"``.
    """
    if direction == "sp_":
        entity, relation = fixed[0], fixed[1]
    else:
        relation, entity = fixed[0], fixed[1]
    return score_queries(model, direction, np.array([entity]), np.array([relation]))[0]
