"""Pytest configuration and shared fixtures."""

import itertools

import numpy as np
import pytest

from grash.kg import DatasetSplit, KnowledgeGraph, generate_clustered_kg, holdout_split


def make_graph(triples: list[tuple[str, str, str]]) -> KnowledgeGraph:
    return KnowledgeGraph.from_labeled_triples(triples)


def random_graph(seed: int, num_entities: int = 60, num_triples: int = 300, num_relations: int = 3):
    """Seeded random graph; self-loops allowed, duplicates dropped."""
    rng = np.random.default_rng(seed)
    rows = np.stack(
        [
            rng.integers(0, num_entities, num_triples),
            rng.integers(0, num_relations, num_triples),
            rng.integers(0, num_entities, num_triples),
        ],
        axis=1,
    )
    return make_graph([(f"e{s}", f"r{p}", f"e{o}") for s, p, o in rows.tolist()])


def peel_oracle(graph: KnowledgeGraph, k: int) -> set[int]:
    """Entities of the k-core by repeatedly deleting entities in fewer than k triples."""
    alive = set(range(graph.num_entities))
    triples = graph.triples.tolist()
    while True:
        degree = {e: 0 for e in alive}
        for s, _, o in triples:
            if s in alive and o in alive:
                degree[s] += 1
                if o != s:
                    degree[o] += 1
        weak = {e for e, d in degree.items() if d < k}
        if not weak:
            return alive
        alive -= weak


@pytest.fixture
def triangle() -> KnowledgeGraph:
    """a -> b -> c -> a with one relation."""
    return make_graph([("a", "r", "b"), ("b", "r", "c"), ("c", "r", "a")])


@pytest.fixture
def path_graph() -> KnowledgeGraph:
    return make_graph([("a", "r", "b"), ("b", "r", "c")])


@pytest.fixture
def star() -> KnowledgeGraph:
    """Hub with five leaves."""
    return make_graph([("hub", "r", f"leaf{i}") for i in range(5)])


@pytest.fixture
def clique_with_pendants() -> KnowledgeGraph:
    """A 4-clique (6 triples) plus one pendant entity on each clique member."""
    members = ["a", "b", "c", "d"]
    triples = [(x, "r", y) for x, y in itertools.combinations(members, 2)]
    triples += [(m, "p", f"{m}_leaf") for m in members]
    return make_graph(triples)


@pytest.fixture
def ten_triple_graph() -> KnowledgeGraph:
    return make_graph(
        [
            ("a", "r1", "b"),
            ("a", "r1", "c"),
            ("b", "r2", "c"),
            ("c", "r2", "d"),
            ("b", "r1", "d"),
            ("a", "r2", "d"),
            ("d", "r1", "e"),
            ("e", "r2", "f"),
            ("f", "r1", "g"),
            ("g", "r1", "h"),
        ]
    )


@pytest.fixture
def clique_pattern() -> KnowledgeGraph:
    """Twenty disjoint directed 3-cycles: a learnable toy pattern."""
    triples = []
    for i in range(20):
        a, b, c = f"a{i}", f"b{i}", f"c{i}"
        triples += [(a, "r", b), (b, "r", c), (c, "r", a)]
    return make_graph(triples)


@pytest.fixture
def toy_dataset() -> DatasetSplit:
    """Small clustered dataset with a valid and a test split."""
    graph = generate_clustered_kg(
        num_entities=200, num_relations=4, num_triples=2000, num_clusters=4, seed=3
    )
    return holdout_split(graph, valid_size=100, test_size=100, seed=0)


@pytest.fixture
def tiny_params():
    """Search parameters small enough for unit tests."""
    from grash.search import SearchParams

    return SearchParams(
        budget=2.0,
        num_configs=4,
        eta=2,
        max_epochs=2.0,
        variant="epoch",
        valid_size=50,
        dim=8,
        seed=0,
        workers=1,
    )


@pytest.fixture
def small_space():
    """Default space with small negative counts and batches."""
    from grash.space import default_space, merge_space

    return merge_space(
        default_space(),
        {
            "params": {
                "num_negatives": {"kind": "int_log", "low": 4, "high": 32},
                "batch_size": {"kind": "int_log", "low": 64, "high": 256},
                "learning_rate": {"kind": "log", "low": 0.01, "high": 0.3},
            }
        },
    )


@pytest.fixture(autouse=True)
def isolated_dirs(tmp_path, monkeypatch):
    """Keep ladder caches and run directories inside the test's tmp dir."""
    from grash.config import settings

    monkeypatch.setattr(settings, "cache_dir", tmp_path / "cache")
    monkeypatch.setattr(settings, "runs_dir", tmp_path / "runs")


@pytest.fixture
def inverse_pairs() -> DatasetSplit:
    """200 pairs x -r1-> y; r2 is the inverse, held out for the first 40 pairs."""
    forward = [(2 * i, 0, 2 * i + 1) for i in range(200)]
    backward = [(2 * i + 1, 1, 2 * i) for i in range(200)]
    return DatasetSplit(
        entities=tuple(f"e{i}" for i in range(400)),
        relations=("r1", "r2"),
        train=np.array(forward + backward[40:], dtype=np.int64),
        valid=np.array(backward[20:40], dtype=np.int64),
        test=np.array(backward[:20], dtype=np.int64),
    )
