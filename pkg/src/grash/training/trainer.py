"""Cross-entropy training loop with per-direction negative sampling."""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..config import settings
from ..errors import EmptyGraphError, TrainingDivergedError
from ..model.embedding import EmbeddingModel
from ..model.scorers import reduce_to_shape
from .models import LossTrace, TrainConfig
from .negatives import NegativeSampler
from .optimizers import Optimizer, make_optimizer

logger = logging.getLogger(__name__)


@dataclass
class BatchGradients:
    """Loss of one batch and the gradients of the rows it touched."""

    loss: float
    entity_rows: np.ndarray
    entity_grads: np.ndarray
    relation_rows: np.ndarray
    relation_grads: np.ndarray


@dataclass
class DropoutMasks:
    """Inverted-dropout multipliers for the positive triples' embeddings."""

    subjects: np.ndarray
    relations: np.ndarray
    objects: np.ndarray

    @classmethod
    def draw(
        cls, rng: np.random.Generator, rate: float, rows: int, dim: int, rel_width: int
    ) -> Optional["DropoutMasks"]:
        if rate <= 0:
            return None
        keep = 1.0 - rate

        def mask(width):
            return (rng.random((rows, width)) < keep) / keep

        return cls(mask(dim), mask(rel_width), mask(dim))


def _log_softmax_grad(scores: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-row cross-entropy with the target in column 0, and d(loss)/d(scores)."""
    shifted = scores - scores.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    losses = log_norm - shifted[:, 0]
    grad = np.exp(shifted - log_norm[:, None])
    grad[:, 0] -= 1.0
    return losses, grad


def batch_loss(
    model: EmbeddingModel,
    positives: np.ndarray,
    negative_objects: np.ndarray,
    negative_subjects: np.ndarray,
    entity_reg: float = 0.0,
    relation_reg: float = 0.0,
    dropout: Optional[DropoutMasks] = None,
    chunk_elements: Optional[int] = None,
) -> BatchGradients:
    """Loss and sparse gradients of one batch.

    Each positive is scored against its own negatives in both directions;
    the loss is the softmax cross-entropy of the positive among
    ``1 + N`` candidates, averaged over positives and directions, plus the
    mean squared norm of the entity/relation rows used, weighted by the
    regularization strengths.

    Args:
        model: Model to differentiate (not modified)
        positives: (B, 3) triples
        negative_objects: (B, N) object replacements
        negative_subjects: (B, N) subject replacements
        entity_reg: Entity penalty weight
        relation_reg: Relation penalty weight
        dropout: Masks for the positives' fixed-side embeddings
        chunk_elements: Upper bound on floats per scoring block

    Returns:
        BatchGradients over the unique rows touched
    """
    chunk_elements = chunk_elements or settings.train_chunk_elements
    scorer = model.scorer
    E, R = model.entity_embeddings, model.relation_embeddings
    batch = len(positives)
    n_candidates = negative_objects.shape[1] + 1

    candidates_o = np.concatenate([positives[:, 2:3], negative_objects], axis=1)
    candidates_s = np.concatenate([positives[:, 0:1], negative_subjects], axis=1)

    entity_rows = np.unique(np.concatenate([candidates_o.ravel(), candidates_s.ravel()]))
    relation_rows = np.unique(positives[:, 1])
    entity_grads = np.zeros((len(entity_rows), E.shape[1]))
    relation_grads = np.zeros((len(relation_rows), R.shape[1]))

    def scatter(target, rows, index, grads):
        np.add.at(target, np.searchsorted(rows, index.ravel()), grads.reshape(-1, grads.shape[-1]))

    step = max(1, chunk_elements // (n_candidates * E.shape[1]))
    total = 0.0
    scale = 1.0 / (2 * batch)
    for start in range(0, batch, step):
        chunk = slice(start, min(start + step, batch))
        pos = positives[chunk]
        s, p, o = E[pos[:, 0]], R[pos[:, 1]], E[pos[:, 2]]
        if dropout is not None:
            ms, mp, mo = dropout.subjects[chunk], dropout.relations[chunk], dropout.objects[chunk]
            s, p, o = s * ms, p * mp, o * mo
        else:
            ms = mp = mo = 1.0

        s, p, o = s[:, None, :], p[:, None, :], o[:, None, :]

        def fixed(grad, like, mask):
            return reduce_to_shape(grad, like.shape)[:, 0, :] * mask

        # (s, p, ?)
        cands = E[candidates_o[chunk]]
        losses, upstream = _log_softmax_grad(scorer.forward(s, p, cands))
        total += losses.sum()
        gs, gp, gc = scorer.backward(s, p, cands, upstream * scale)
        scatter(entity_grads, entity_rows, pos[:, 0], fixed(gs, s, ms))
        scatter(relation_grads, relation_rows, pos[:, 1], fixed(gp, p, mp))
        scatter(entity_grads, entity_rows, candidates_o[chunk], gc)

        # (?, p, o)
        cands = E[candidates_s[chunk]]
        losses, upstream = _log_softmax_grad(scorer.forward(cands, p, o))
        total += losses.sum()
        gc, gp, go = scorer.backward(cands, p, o, upstream * scale)
        scatter(entity_grads, entity_rows, candidates_s[chunk], gc)
        scatter(relation_grads, relation_rows, pos[:, 1], fixed(gp, p, mp))
        scatter(entity_grads, entity_rows, pos[:, 2], fixed(go, o, mo))

    loss = total * scale
    if entity_reg:
        used = E[entity_rows]
        loss += entity_reg * (used * used).sum() / len(entity_rows)
        entity_grads += 2.0 * entity_reg * used / len(entity_rows)
    if relation_reg:
        used = R[relation_rows]
        loss += relation_reg * (used * used).sum() / len(relation_rows)
        relation_grads += 2.0 * relation_reg * used / len(relation_rows)

    return BatchGradients(float(loss), entity_rows, entity_grads, relation_rows, relation_grads)


def _apply(optimizer: Optimizer, model: EmbeddingModel, grads: BatchGradients) -> None:
    optimizer.step("entities", model.entity_embeddings, grads.entity_rows, grads.entity_grads)
    optimizer.step(
        "relations", model.relation_embeddings, grads.relation_rows, grads.relation_grads
    )


def train(
    model: EmbeddingModel,
    train_triples: np.ndarray,
    config: TrainConfig,
    chunk_elements: Optional[int] = None,
) -> tuple[EmbeddingModel, LossTrace]:
    """Train a copy of ``model`` for ``config.epochs`` (possibly fractional) epochs.

    Every epoch reshuffles the triples with the config seed stream; a
    fractional remainder trains on the first ``floor(frac * |train|)`` triples of
    one more shuffle. Optimizer state persists across epochs and the
    learning rate is multiplied by ``lr_decay`` after each one.

    Args:
        model: Initial model (left untouched)
        train_triples: (m, 3) triples in the model's index space
        config: Hyperparameters; ``num_negatives`` must already be scaled
        chunk_elements: Scoring block size override

    Returns:
        (trained model, loss trace)

    Raises:
        EmptyGraphError: If there are no training triples
        NegativeSamplingError: If num_negatives >= number of entities
        TrainingDivergedError: On a non-finite loss or parameters
    """
    model = model.copy()
    trace = LossTrace()
    if config.epochs == 0:
        return model, trace

    train_triples = np.asarray(train_triples, dtype=np.int64)
    n = len(train_triples)
    if n == 0:
        raise EmptyGraphError("no training triples")

    degrees = None
    if config.negative_pool == "frequency":
        degrees = np.bincount(train_triples[:, 0], minlength=model.num_entities) + np.bincount(
            train_triples[:, 2], minlength=model.num_entities
        )
    sampler = NegativeSampler(model.num_entities, config.negative_pool, degrees, chunk_elements)
    optimizer = make_optimizer(config.optimizer, config.learning_rate, config.weight_decay)
    rng = np.random.default_rng(config.seed)
    negatives = config.num_negatives

    full_epochs = int(math.floor(config.epochs))
    partial = config.epochs - full_epochs
    passes = full_epochs + (1 if partial > 0 else 0)

    for epoch in range(passes):
        order = rng.permutation(n)
        if epoch == full_epochs:
            order = order[: int(math.floor(partial * n + 1e-9))]
            if len(order) == 0:
                logger.warning(f"Partial epoch of {partial:.4f} covers no triples")
                break

        epoch_loss = 0.0
        for batch_index, start in enumerate(range(0, len(order), config.batch_size)):
            positives = train_triples[order[start : start + config.batch_size]]
            rows = len(positives)
            negative_objects = sampler.sample(rows, negatives, rng)
            negative_subjects = sampler.sample(rows, negatives, rng)
            masks = DropoutMasks.draw(
                rng, config.dropout, rows, model.dim, model.relation_embeddings.shape[1]
            )
            grads = batch_loss(
                model,
                positives,
                negative_objects,
                negative_subjects,
                entity_reg=config.entity_reg,
                relation_reg=config.relation_reg,
                dropout=masks,
                chunk_elements=chunk_elements,
            )
            if not math.isfinite(grads.loss):
                raise TrainingDivergedError("non-finite loss", epoch, batch_index)
            _apply(optimizer, model, grads)
            epoch_loss += grads.loss * rows
            trace.score_computations += rows * (2 * negatives + 1)
            trace.triples_seen += rows

        if not model.is_finite():
            raise TrainingDivergedError("non-finite parameters", epoch, batch_index)
        trace.epoch_losses.append(epoch_loss / len(order))
        optimizer.decay(config.lr_decay)
        logger.debug(f"Epoch {epoch + 1}/{passes}: loss {trace.epoch_losses[-1]:.4f}")

    trace.epochs_trained = config.epochs
    return model, trace
