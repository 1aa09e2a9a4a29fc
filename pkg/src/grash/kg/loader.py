"""Triple file reading and writing."""

import hashlib
import logging
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from ..errors import TripleFormatError
from .models import DatasetSplit, KnowledgeGraph, LabeledTriple
from .split import build_split, holdout_split

logger = logging.getLogger(__name__)

SUPPORTED_FORMATS = ("tsv",)
SPLIT_FILE_SUFFIXES = (".txt", ".tsv", ".del", "")


def read_labeled_triples(path: Path) -> Iterator[LabeledTriple]:
    """Yield label triples from a tab-separated file.

    Blank lines are skipped; surrounding whitespace of each label is removed.

    Raises:
        TripleFormatError: On a line without exactly three non-empty fields
    """
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            fields = [field.strip() for field in line.rstrip("\r\n").split("\t")]
            if len(fields) != 3:
                raise TripleFormatError(
                    f"expected 3 tab-separated fields, found {len(fields)}", line_number
                )
            if not all(fields):
                raise TripleFormatError("empty label", line_number)
            yield fields[0], fields[1], fields[2]


def load_triples(path: Path, format: str = "tsv") -> KnowledgeGraph:
    """Load a knowledge graph from a triple file.

    Args:
        path: File with one triple per line
        format: Triple-file format; only ``"tsv"`` is supported

    Returns:
        KnowledgeGraph with first-occurrence vocabularies

    Raises:
        ValueError: On an unsupported format
        TripleFormatError: On a malformed line
        EmptyGraphError: If the file holds no triples
    """
    if format not in SUPPORTED_FORMATS:
        raise ValueError(f"Unsupported triple format '{format}' (supported: {SUPPORTED_FORMATS})")

    path = Path(path)
    graph = KnowledgeGraph.from_labeled_triples(read_labeled_triples(path))
    logger.info(
        f"Loaded {path}: {graph.num_entities} entities, {graph.num_relations} relations, "
        f"{graph.num_triples} triples ({graph.duplicates_dropped} duplicates dropped)"
    )
    return graph


def write_triples(path: Path, labeled: Iterable[LabeledTriple]) -> int:
    """Write label triples as tab-separated lines.

    Returns:
        Number of lines written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for triple in labeled:
            f.write("\t".join(triple) + "\n")
            count += 1
    return count


def write_split(directory: Path, split: DatasetSplit) -> None:
    """Write a split as train.txt / valid.txt / test.txt label files."""
    for name in ("train", "valid", "test"):
        rows = getattr(split, name)
        if name == "test" and len(rows) == 0:
            continue
        write_triples(
            Path(directory) / f"{name}.txt",
            (
                (split.entities[s], split.relations[p], split.entities[o])
                for s, p, o in rows
            ),
        )


def _find_split_file(directory: Path, name: str) -> Optional[Path]:
    for suffix in SPLIT_FILE_SUFFIXES:
        candidate = directory / f"{name}{suffix}"
        if candidate.is_file():
            return candidate
    return None


def _index_labeled(
    labeled: Iterable[LabeledTriple],
    entity_ids: dict[str, int],
    relation_ids: dict[str, int],
) -> tuple[np.ndarray, int]:
    """Map label triples onto an existing vocabulary, dropping unknown labels."""
    rows = []
    dropped = 0
    for subject, relation, obj in labeled:
        try:
            rows.append((entity_ids[subject], relation_ids[relation], entity_ids[obj]))
        except KeyError:
            dropped += 1
    return np.array(rows, dtype=np.int64).reshape(-1, 3), dropped


def dataset_files(path: Path) -> list[Path]:
    """Files that make up a dataset path, in train/valid/test order."""
    path = Path(path)
    if path.is_dir():
        return [f for f in (_find_split_file(path, n) for n in ("train", "valid", "test")) if f]
    return [path]


def dataset_fingerprint(paths: Sequence[Path]) -> str:
    """SHA-256 over the bytes of the given files."""
    digest = hashlib.sha256()
    for path in paths:
        digest.update(Path(path).read_bytes())
    return digest.hexdigest()


def load_dataset(
    path: Path,
    valid_size: int = 5000,
    test_size: int = 0,
    seed: int = 0,
) -> DatasetSplit:
    """Load a dataset from a directory of split files or from a single file.

    A directory must contain ``train`` (``.txt``/``.tsv``/``.del`` or no
    suffix) and may contain ``valid`` and ``test``; the vocabulary is taken
    from train and unseen valid/test triples are dropped. A single file is
    split with :func:`holdout_split`.

    Args:
        path: Dataset directory or triple file
        valid_size: Validation size when splitting a single file
        test_size: Test size when splitting a single file
        seed: Split seed when splitting a single file

    Returns:
        DatasetSplit
    """
    path = Path(path)
    if not path.is_dir():
        return holdout_split(load_triples(path), valid_size, test_size, seed)

    train_file = _find_split_file(path, "train")
    if train_file is None:
        raise FileNotFoundError(f"No train file in dataset directory {path}")

    train_graph = load_triples(train_file)
    entity_ids = {label: i for i, label in enumerate(train_graph.entities)}
    relation_ids = {label: i for i, label in enumerate(train_graph.relations)}

    held_out = {}
    unseen = {}
    for name in ("valid", "test"):
        split_file = _find_split_file(path, name)
        if split_file is None:
            held_out[name] = np.zeros((0, 3), dtype=np.int64)
            unseen[name] = 0
            continue
        held_out[name], unseen[name] = _index_labeled(
            read_labeled_triples(split_file), entity_ids, relation_ids
        )
        if unseen[name]:
            logger.warning(
                f"Dropped {unseen[name]} {name} triples with entities/relations unseen in train"
            )

    split = build_split(
        train_graph.entities,
        train_graph.relations,
        train_graph.triples,
        held_out["valid"],
        held_out["test"],
    )
    return DatasetSplit(
        entities=split.entities,
        relations=split.relations,
        train=split.train,
        valid=split.valid,
        test=split.test,
        dropped_valid=split.dropped_valid + unseen["valid"],
        dropped_test=split.dropped_test + unseen["test"],
    )

