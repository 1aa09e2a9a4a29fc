"""Knowledge graph loading, indexing, splitting and statistics."""

from .models import DatasetSplit, GraphStats, KnowledgeGraph, LabeledTriple
from .loader import (
    dataset_files,
    dataset_fingerprint,
    load_dataset,
    load_triples,
    read_labeled_triples,
    write_split,
    write_triples,
)
from .split import build_split, holdout_split, split_train_valid
from .stats import stats
from .synthetic import generate_clustered_kg

__all__ = [
    "DatasetSplit",
    "GraphStats",
    "KnowledgeGraph",
    "LabeledTriple",
    "dataset_files",
    "dataset_fingerprint",
    "load_dataset",
    "load_triples",
    "read_labeled_triples",
    "write_split",
    "write_triples",
    "build_split",
    "holdout_split",
    "split_train_valid",
    "stats",
    "generate_clustered_kg",
]
