"""Tests for graph reductions, core decomposition and the ladder cache."""

import json

import numpy as np
import pytest

from grash.errors import EmptyCoreError, ReductionError
from grash.kg import generate_clustered_kg
from grash.reduction import (
    CoreLadder,
    CoreLevel,
    LadderCache,
    core_decomposition,
    incidence_lists,
    k_core,
    random_walk_for_fraction,
    random_walk_sample,
    select_core_for_fidelity,
    triple_sample,
)
from grash.reduction.kcore import LADDER_VERSION

from .conftest import make_graph, peel_oracle, random_graph


def _labeled(subgraph):
    return set(subgraph.graph.labeled_triples())


def _parent_labeled(graph):
    return set(graph.labeled_triples())


class TestTripleSample:
    """Test uniform triple sampling."""

    def test_full_fraction_is_identity(self, ten_triple_graph):
        """Test fraction 1.0 reproduces the parent."""
        sub = triple_sample(ten_triple_graph, 1.0, seed=0)

        assert sub.graph.entities == ten_triple_graph.entities
        assert sub.graph.relations == ten_triple_graph.relations
        assert np.array_equal(sub.graph.triples, ten_triple_graph.triples)

    def test_exact_count(self, ten_triple_graph):
        """Test 60% of ten triples keeps exactly six."""
        sub = triple_sample(ten_triple_graph, 0.6, seed=3)

        assert sub.graph.num_triples == 6
        assert sub.triple_fraction == pytest.approx(0.6)
        assert sub.provenance.technique == "triple"

    def test_induced_vocabulary(self):
        """Test every retained entity occurs in a retained triple."""
        graph = random_graph(seed=1, num_entities=200, num_triples=1000)
        sub = triple_sample(graph, 0.5, seed=0)

        assert (sub.graph.entity_degrees() >= 1).all()
        assert sub.graph.validate() == []
        assert _labeled(sub) <= _parent_labeled(graph)

    def test_maps_point_back_to_parent(self):
        """Test entity/relation maps translate triples back to parent rows."""
        graph = random_graph(seed=2)
        sub = triple_sample(graph, 0.3, seed=1)
        parent_rows = {tuple(r) for r in graph.triples.tolist()}

        assert {tuple(r) for r in sub.parent_triples().tolist()} <= parent_rows
        assert (np.diff(sub.entity_map) > 0).all()

    @pytest.mark.parametrize("fraction", [0.0, -0.1, 1.5])
    def test_invalid_fraction(self, triangle, fraction):
        """Test fractions outside (0, 1] are rejected."""
        with pytest.raises(ReductionError):
            triple_sample(triangle, fraction, seed=0)

    def test_rounds_to_zero(self, triangle):
        """Test a fraction retaining no triples is an error."""
        with pytest.raises(ReductionError, match="no triples"):
            triple_sample(triangle, 0.1, seed=0)


class TestRandomWalk:
    """Test multi-start random walk sampling."""

    def test_hub_start_keeps_one_triple(self, star):
        """Test starting at the hub and stepping once retains exactly one triple."""
        hub = star.entities.index("hub")
        for seed in range(100):
            start = np.random.default_rng(seed).choice(star.num_entities, size=1, replace=False)
            if start[0] == hub:
                break
        sub = random_walk_sample(star, num_starts=1, walk_length=1, seed=seed)

        assert sub.graph.num_triples == 1
        assert "hub" in sub.graph.entities

    def test_subset_and_bounded(self, ten_triple_graph):
        """Test two walks of three steps retain at most six parent triples."""
        for seed in range(10):
            sub = random_walk_sample(ten_triple_graph, num_starts=2, walk_length=3, seed=seed)

            assert sub.graph.num_triples <= 6
            assert _labeled(sub) <= _parent_labeled(ten_triple_graph)

    def test_long_walks_cover_connected_graph(self):
        """Test every-entity starts with long walks cover a small connected graph."""
        graph = make_graph([(f"n{i}", "r", f"n{i + 1}") for i in range(20)])
        sub = random_walk_sample(graph, graph.num_entities, walk_length=200, seed=0)

        assert sub.graph.num_triples == graph.num_triples

    def test_too_many_starts(self, triangle):
        """Test more starts than entities is rejected."""
        with pytest.raises(ReductionError, match="exceeds"):
            random_walk_sample(triangle, num_starts=4, walk_length=1, seed=0)

    def test_for_fraction_reaches_target(self):
        """Test the fraction-driven walk gets close to the requested size."""
        graph = random_graph(seed=5, num_entities=100, num_triples=800)
        sub = random_walk_for_fraction(graph, 0.25, seed=0)

        assert sub.graph.num_triples >= 0.9 * round(0.25 * graph.num_triples)
        assert set(sub.provenance.parameters) == {"num_starts", "walk_length", "seed"}


class TestCoreDecomposition:
    """Test peeling against hand examples and a brute-force oracle."""

    def test_triangle(self, triangle):
        """Test the triangle is its own 2-core and has no 3-core."""
        ladder = core_decomposition(triangle)

        assert ladder.coreness.tolist() == [2, 2, 2]
        assert ladder.max_k == 2
        assert k_core(triangle, 2, ladder).graph.num_triples == 3
        with pytest.raises(EmptyCoreError) as excinfo:
            k_core(triangle, 3, ladder)
        assert excinfo.value.largest_k == 2

    def test_path(self, path_graph):
        """Test a path has coreness 1 everywhere."""
        ladder = core_decomposition(path_graph)

        assert ladder.coreness.tolist() == [1, 1, 1]
        with pytest.raises(EmptyCoreError, match="k=1"):
            k_core(path_graph, 2, ladder)

    def test_clique_with_pendants(self, clique_with_pendants):
        """Test the 3-core is exactly the 4-clique."""
        ladder = core_decomposition(clique_with_pendants)
        core = k_core(clique_with_pendants, 3, ladder)

        assert core.graph.num_triples == 6
        assert set(core.graph.entities) == {"a", "b", "c", "d"}

    def test_one_core_is_parent(self, ten_triple_graph):
        """Test k=1 keeps every triple."""
        ladder = core_decomposition(ten_triple_graph)

        assert k_core(ten_triple_graph, 1, ladder).graph.num_triples == 10

    @pytest.mark.parametrize("seed", range(50))
    def test_matches_peeling_oracle(self, seed):
        """Test coreness and every k-core triple set against iterative peeling."""
        rng = np.random.default_rng(seed)
        graph = random_graph(
            seed=seed,
            num_entities=int(rng.integers(20, 200)),
            num_triples=int(rng.integers(50, 1000)),
        )
        ladder = core_decomposition(graph)

        for k in range(1, ladder.max_k + 2):
            alive = peel_oracle(graph, k)
            assert set(np.flatnonzero(ladder.coreness >= k).tolist()) == alive
            if not alive:
                continue
            expected = {
                (graph.entities[s], graph.relations[p], graph.entities[o])
                for s, p, o in graph.triples.tolist()
                if s in alive and o in alive
            }
            core = k_core(graph, k, ladder)
            assert _labeled(core) == expected
            assert ladder.level(k).triples == len(expected)
            assert ladder.level(k).entities == len(alive)

    @pytest.mark.parametrize("seed", range(20))
    def test_cores_are_maximal(self, seed):
        """Test no peeled entity reaches degree k when added back to the k-core."""
        graph = random_graph(seed=200 + seed, num_entities=80, num_triples=400)
        ladder = core_decomposition(graph)
        triples = graph.triples.tolist()

        for k in range(1, ladder.max_k + 1):
            core = set(np.flatnonzero(ladder.coreness >= k).tolist())
            for entity in np.flatnonzero(ladder.coreness < k).tolist():
                alive = core | {entity}
                degree = sum(
                    1
                    for s, _, o in triples
                    if entity in (s, o) and s in alive and o in alive
                )
                assert degree < k

    def test_incidence_lists_list_self_loops_once(self):
        """Test a self-loop appears once in its entity's incidence list."""
        graph = make_graph([("a", "r", "a"), ("a", "r", "b")])
        incident, indptr = incidence_lists(graph)

        assert sorted(incident[indptr[0] : indptr[1]].tolist()) == [0, 1]
        assert incident[indptr[1] : indptr[2]].tolist() == [1]


class TestSelectCore:
    """Test core selection for a target triple fraction."""

    @pytest.fixture
    def ladder(self):
        return CoreLadder(
            coreness=np.zeros(0, dtype=np.int64),
            levels=(
                CoreLevel(k=1, triples=100, entities=50),
                CoreLevel(k=2, triples=40, entities=20),
                CoreLevel(k=3, triples=10, entities=6),
            ),
            parent_entity_count=50,
            parent_triple_count=100,
        )

    def test_half(self, ladder):
        """Test target 0.5 picks the 2-core."""
        choice = select_core_for_fidelity(ladder, 0.5)

        assert choice.k == 2
        assert not choice.overshoot

    def test_full(self, ladder):
        """Test target 1.0 picks the 1-core."""
        assert select_core_for_fidelity(ladder, 1.0).k == 1

    def test_overshoot(self, ladder):
        """Test a target below the deepest core flags an overshoot."""
        choice = select_core_for_fidelity(ladder, 0.05)

        assert choice.k == 3
        assert choice.overshoot
        assert choice.triple_fraction == pytest.approx(0.1)

    def test_invalid_target(self, ladder):
        """Test targets outside (0, 1] are rejected."""
        with pytest.raises(ReductionError):
            select_core_for_fidelity(ladder, 0.0)


class TestLadderCache:
    """Test the on-disk ladder cache."""

    def test_round_trip(self, tmp_path):
        """Test a stored ladder is found again for the same graph."""
        graph = random_graph(seed=9)
        cache = LadderCache(tmp_path)
        computed = cache.get_or_compute(graph)

        loaded = cache.get(graph)

        assert loaded is not None
        assert np.array_equal(loaded.coreness, computed.coreness)
        assert loaded.levels == computed.levels

    def test_miss_for_other_graph(self, tmp_path, triangle, path_graph):
        """Test the cache is keyed by graph content."""
        cache = LadderCache(tmp_path)
        cache.get_or_compute(triangle)

        assert cache.get(path_graph) is None

    def test_unknown_version_ignored(self, tmp_path, triangle):
        """Test a summary with another version is treated as a miss."""
        cache = LadderCache(tmp_path)
        summary_path = cache.store(core_decomposition(triangle))
        summary = json.loads(summary_path.read_text())
        summary["version"] = LADDER_VERSION + 1
        summary_path.write_text(json.dumps(summary))

        assert cache.get(triangle) is None


class TestReductionEntityCounts:
    """Test k-cores keep few entities for the triples they retain."""

    def test_kcore_keeps_fewest_entities(self):
        """Test at equal triple counts the k-core has no more entities than the samplers."""
        beats_triple = beats_walk = 0
        for seed in range(10):
            graph = generate_clustered_kg(
                num_entities=400, num_relations=4, num_triples=3000, num_clusters=4, seed=seed
            )
            ladder = core_decomposition(graph)
            core = k_core(graph, select_core_for_fidelity(ladder, 0.25).k, ladder)
            fraction = core.graph.num_triples / graph.num_triples

            sampled = triple_sample(graph, fraction, seed=seed)
            walked = random_walk_for_fraction(graph, fraction, seed=seed)

            assert sampled.graph.num_triples == core.graph.num_triples
            beats_triple += core.graph.num_entities <= sampled.graph.num_entities
            # walks hit their target only approximately, so compare entities per triple
            beats_walk += (
                core.graph.num_entities * walked.graph.num_triples
                <= walked.graph.num_entities * core.graph.num_triples
            )

        assert beats_triple > 5
        assert beats_walk > 5
