"""Binary model checkpoints.

Layout (little-endian):

    magic       4s   b"GRSH"
    version     H    1
    scorer      B    0=complex 1=transe 2=rotate
    p_norm      B
    dim         I
    n_entities  I
    n_relations I
    rel_width   I
    seed        q
    vocabulary  32s  SHA-256 of the ordered vocabularies (zeros if unknown)

followed by the entity matrix and the relation matrix as row-major float64.
"""

import logging
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from ..errors import CheckpointError
from .embedding import EmbeddingModel, validate_model_shape
from .scorers import SCORERS

logger = logging.getLogger(__name__)

MAGIC = b"GRSH"
VERSION = 1
HEADER = struct.Struct("<4sHBBIIIIq32s")
NO_VOCABULARY = bytes(32)


@dataclass(frozen=True)
class CheckpointHeader:
    scorer: str
    p_norm: int
    dim: int
    n_entities: int
    n_relations: int
    rel_width: int
    seed: int
    vocabulary: bytes


def save_checkpoint(
    path: Path, model: EmbeddingModel, vocabulary: bytes = NO_VOCABULARY
) -> None:
    """Write a model with its vocabulary fingerprint."""
    if len(vocabulary) != 32:
        raise CheckpointError("vocabulary fingerprint must be 32 bytes")
    header = HEADER.pack(
        MAGIC,
        VERSION,
        SCORERS.index(model.scorer_name),
        model.p_norm,
        model.dim,
        model.num_entities,
        model.num_relations,
        model.relation_embeddings.shape[1],
        model.seed,
        vocabulary,
    )
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(header)
        f.write(np.ascontiguousarray(model.entity_embeddings, dtype="<f8").tobytes())
        f.write(np.ascontiguousarray(model.relation_embeddings, dtype="<f8").tobytes())


def read_header(data: bytes) -> CheckpointHeader:
    if len(data) < HEADER.size:
        raise CheckpointError("checkpoint is truncated")
    magic, version, tag, p_norm, dim, n_e, n_r, width, seed, vocab = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CheckpointError("not a grash checkpoint")
    if version != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    if tag >= len(SCORERS):
        raise CheckpointError(f"unknown scorer tag {tag}")
    return CheckpointHeader(SCORERS[tag], p_norm, dim, n_e, n_r, width, seed, vocab)


def load_checkpoint(
    path: Path, expected_vocabulary: Optional[bytes] = None
) -> tuple[EmbeddingModel, CheckpointHeader]:
    """Read a checkpoint, optionally checking its vocabulary fingerprint.

    Raises:
        CheckpointError: On a malformed file or a vocabulary mismatch
    """
    data = Path(path).read_bytes()
    header = read_header(data)
    try:
        validate_model_shape(header.scorer, header.dim)
    except ValueError as e:
        raise CheckpointError(str(e)) from e

    if expected_vocabulary is not None and header.vocabulary != expected_vocabulary:
        if header.vocabulary == NO_VOCABULARY:
            logger.warning(f"Checkpoint {path} carries no vocabulary fingerprint")
        else:
            raise CheckpointError("checkpoint vocabulary does not match the dataset")

    n_entity_values = header.n_entities * header.dim
    n_relation_values = header.n_relations * header.rel_width
    expected = HEADER.size + 8 * (n_entity_values + n_relation_values)
    if len(data) != expected:
        raise CheckpointError(f"checkpoint size {len(data)} != expected {expected}")

    values = np.frombuffer(data, dtype="<f8", offset=HEADER.size).astype(np.float64)
    model = EmbeddingModel(
        scorer_name=header.scorer,
        dim=header.dim,
        entity_embeddings=values[:n_entity_values].reshape(header.n_entities, header.dim),
        relation_embeddings=values[n_entity_values:].reshape(
            header.n_relations, header.rel_width
        ),
        p_norm=header.p_norm,
        seed=header.seed,
    )
    return model, header
