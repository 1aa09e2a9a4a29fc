"""Tests for knowledge graph loading, splitting and statistics."""

import numpy as np
import pytest

from grash.errors import EmptyGraphError, SplitError, TripleFormatError
from grash.kg import (
    KnowledgeGraph,
    dataset_files,
    dataset_fingerprint,
    generate_clustered_kg,
    holdout_split,
    load_dataset,
    load_triples,
    split_train_valid,
    stats,
    write_split,
    write_triples,
)

from .conftest import random_graph


def _rows(split, name):
    return {tuple(r) for r in getattr(split, name).tolist()}


def _labeled(split, name):
    return {
        (split.entities[s], split.relations[p], split.entities[o])
        for s, p, o in getattr(split, name).tolist()
    }


class TestLoadTriples:
    """Test tab-separated triple loading."""

    def test_duplicates_dropped(self, tmp_path):
        """Test a repeated triple is kept once and reported."""
        path = tmp_path / "kg.tsv"
        path.write_text("a\tr\tb\nb\tr\tc\na\tr\tb\n")

        graph = load_triples(path)

        assert graph.num_entities == 3
        assert graph.num_relations == 1
        assert graph.num_triples == 2
        assert graph.duplicates_dropped == 1

    def test_first_occurrence_vocabulary(self, tmp_path):
        """Test vocabularies follow first occurrence order."""
        path = tmp_path / "kg.tsv"
        path.write_text("x\tq\ty\n\ny\tp\tz\n")

        graph = load_triples(path)

        assert graph.entities == ("x", "y", "z")
        assert graph.relations == ("q", "p")
        assert graph.triples.tolist() == [[0, 0, 1], [1, 1, 2]]

    def test_write_round_trip(self, tmp_path):
        """Test writing a loaded file back gives its distinct triples, whitespace trimmed."""
        source = tmp_path / "raw.tsv"
        source.write_text(
            "a\tr\tb\r\n\n b \tr\tc\nc\tr2\ta\na\tr\tb\n\t\nd\tr2 \td\n", encoding="utf-8"
        )

        graph = load_triples(source)
        target = tmp_path / "out.tsv"
        written = write_triples(target, graph.labeled_triples())

        lines = target.read_text(encoding="utf-8").splitlines()
        assert written == len(lines) == 4
        assert sorted(lines) == sorted(["a\tr\tb", "b\tr\tc", "c\tr2\ta", "d\tr2\td"])
        assert np.array_equal(load_triples(target).triples, graph.triples)

    def test_empty_file(self, tmp_path):
        """Test an empty file is an error."""
        path = tmp_path / "kg.tsv"
        path.write_text("\n\n")

        with pytest.raises(EmptyGraphError, match="no triples"):
            load_triples(path)

    def test_malformed_line_reports_line_number(self, tmp_path):
        """Test a wrong field count names the line."""
        path = tmp_path / "kg.tsv"
        path.write_text("a\tr\tb\na\tr\n")

        with pytest.raises(TripleFormatError) as excinfo:
            load_triples(path)

        assert excinfo.value.line_number == 2
        assert "line 2" in str(excinfo.value)

    def test_unsupported_format(self, tmp_path):
        """Test only tsv is accepted."""
        with pytest.raises(ValueError, match="Unsupported"):
            load_triples(tmp_path / "kg.nt", format="ntriples")

    def test_triples_are_read_only(self, triangle):
        """Test graphs cannot be mutated in place."""
        with pytest.raises(ValueError):
            triangle.triples[0, 0] = 2


class TestStats:
    """Test graph statistics."""

    def test_triangle(self, triangle):
        """Test the triangle has degree 2 everywhere."""
        summary = stats(triangle)

        assert (summary.entities, summary.relations, summary.triples) == (3, 1, 3)
        assert summary.min_degree == summary.max_degree == 2

    def test_single_triple(self):
        """Test both entities of a single triple have degree 1."""
        graph = KnowledgeGraph.from_labeled_triples([("a", "r", "b")])

        assert graph.entity_degrees().tolist() == [1, 1]

    def test_ten_triple_hand_count(self, ten_triple_graph):
        """Test counts of the hand-written graph."""
        summary = stats(ten_triple_graph)

        assert summary.entities == 8
        assert summary.relations == 2
        assert summary.triples == 10

    def test_random_graph_recount(self):
        """Test degrees against an independent recount."""
        graph = random_graph(seed=7, num_entities=40, num_triples=100)
        expected = np.zeros(graph.num_entities, dtype=int)
        for s, _, o in graph.triples.tolist():
            expected[s] += 1
            if o != s:
                expected[o] += 1

        assert graph.entity_degrees().tolist() == expected.tolist()
        assert graph.validate() == []


class TestSplitTrainValid:
    """Test validation hold-out."""

    @pytest.fixture
    def graph(self):
        return generate_clustered_kg(
            num_entities=1000, num_relations=10, num_triples=10000, num_clusters=5, seed=1
        )

    def test_disjoint_and_within_original(self, graph):
        """Test valid and train are disjoint subsets of the original triples."""
        split = split_train_valid(graph, 5000, seed=0)
        original = {
            (graph.entities[s], graph.relations[p], graph.entities[o])
            for s, p, o in graph.triples.tolist()
        }
        train = {
            (split.entities[s], split.relations[p], split.entities[o])
            for s, p, o in split.train.tolist()
        }
        valid = {
            (split.entities[s], split.relations[p], split.entities[o])
            for s, p, o in split.valid.tolist()
        }

        assert len(split.valid) <= 5000
        assert not train & valid
        assert train | valid <= original

    def test_valid_uses_only_train_vocabulary(self, graph):
        """Test no validation triple references an entity unseen in train."""
        split = split_train_valid(graph, 5000, seed=0)
        train_entities = set(split.train[:, [0, 2]].ravel().tolist())

        assert set(split.valid[:, [0, 2]].ravel().tolist()) <= train_entities
        assert split.num_entities == len(train_entities)

    def test_seeded(self, graph):
        """Test the same seed gives the same split and another seed a different one."""
        first = split_train_valid(graph, 500, seed=0)
        second = split_train_valid(graph, 500, seed=0)
        other = split_train_valid(graph, 500, seed=1)

        assert np.array_equal(first.valid, second.valid)
        assert _rows(first, "valid") != _rows(other, "valid")

    def test_valid_size_out_of_range(self, triangle):
        """Test holding out every triple is an error."""
        with pytest.raises(SplitError):
            split_train_valid(triangle, 3, seed=0)
        with pytest.raises(SplitError):
            split_train_valid(triangle, 0, seed=0)


class TestDatasetFiles:
    """Test dataset directories and single-file datasets."""

    def test_holdout_split_and_reload(self, tmp_path):
        """Test a written split reloads with identical contents."""
        graph = generate_clustered_kg(
            num_entities=100, num_relations=3, num_triples=800, num_clusters=4, seed=2
        )
        split = holdout_split(graph, valid_size=50, test_size=50, seed=0)
        write_split(tmp_path, split)

        reloaded = load_dataset(tmp_path)

        assert set(reloaded.entities) == set(split.entities)
        for name in ("train", "valid", "test"):
            assert _labeled(reloaded, name) == _labeled(split, name)
        assert not _rows(split, "test") & _rows(split, "train")
        assert not _rows(split, "test") & _rows(split, "valid")

    def test_unseen_held_out_triples_dropped(self, tmp_path):
        """Test valid triples with entities missing from train are dropped."""
        (tmp_path / "train.txt").write_text("a\tr\tb\nb\tr\tc\n")
        (tmp_path / "valid.txt").write_text("a\tr\tc\na\tr\tz\n")

        split = load_dataset(tmp_path)

        assert len(split.valid) == 1
        assert split.dropped_valid == 1
        assert split.test.shape == (0, 3)

    def test_missing_train_file(self, tmp_path):
        """Test a directory without train is rejected."""
        with pytest.raises(FileNotFoundError):
            load_dataset(tmp_path)

    def test_fingerprint_changes_with_content(self, tmp_path):
        """Test the dataset hash covers file bytes."""
        (tmp_path / "train.txt").write_text("a\tr\tb\n")
        before = dataset_fingerprint(dataset_files(tmp_path))
        (tmp_path / "train.txt").write_text("a\tr\tc\n")

        assert dataset_fingerprint(dataset_files(tmp_path)) != before


class TestSyntheticGenerator:
    """Test the clustered KG generator."""

    def test_seeded_and_sized(self):
        """Test determinism and the requested triple count."""
        first = generate_clustered_kg(
            num_entities=300, num_relations=5, num_triples=2000, num_clusters=5, seed=4
        )
        second = generate_clustered_kg(
            num_entities=300, num_relations=5, num_triples=2000, num_clusters=5, seed=4
        )

        assert first.num_triples == 2000
        assert first.fingerprint() == second.fingerprint()
        assert first.validate() == []
