"""Modularity, community adjacency, and greedy reduction."""

import numpy as np
import pytest

from edgeclaim import (
    MergeTrace,
    ParameterError,
    WeightedGraph,
    adjacent_pairs,
    modularity,
    reduce_communities,
)
from edgeclaim.community import Partition

from conftest import modularity_oracle, path_of_cliques


def random_case(seed, n=20, edges=40, communities=5):
    rng = np.random.default_rng(seed)
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = rng.choice(len(all_pairs), size=edges, replace=False)
    pairs = [all_pairs[i] for i in chosen]
    weights = rng.uniform(0.1, 2.0, size=edges)
    g = WeightedGraph(n, [(i, j, w) for (i, j), w in zip(pairs, weights)])
    labels = rng.integers(0, communities, size=n)
    return g, Partition.from_labels(labels)


def chain_of_cliques(sizes):
    """Cliques of the given sizes in a chain, one bridge between neighbors."""
    pairs = []
    base = 0
    for s in sizes:
        for i in range(base, base + s):
            for j in range(i + 1, base + s):
                pairs.append((i, j))
        if base:
            pairs.append((base - 1, base))
        base += s
    labels = np.repeat(np.arange(len(sizes)), sizes)
    return WeightedGraph.from_pairs(base, pairs), Partition.from_labels(labels)


# ------------------------------------------------------------- modularity


def test_one_community_is_zero(karate):
    g, _ = karate
    part = Partition.from_labels(np.zeros(g.vertex_count, dtype=int))
    assert abs(modularity(g, part)) < 1e-12


def test_two_disjoint_cliques_half():
    pairs = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    pairs += [(i, j) for i in range(5, 10) for j in range(i + 1, 10)]
    g = WeightedGraph.from_pairs(10, pairs)
    part = Partition.from_labels([0] * 5 + [1] * 5)
    assert modularity(g, part) == pytest.approx(0.5, abs=1e-12)


def test_karate_faction_split_value(karate):
    g, truth = karate
    part = Partition.from_labels(truth)
    q = modularity(g, part)
    assert q == pytest.approx(0.371466, abs=1e-6)
    assert q == pytest.approx(0.371, abs=0.01)
    assert q == pytest.approx(modularity_oracle(g, truth), abs=1e-12)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_matches_definitional_oracle(seed):
    g, part = random_case(seed)
    q = modularity(g, part)
    assert q == pytest.approx(modularity_oracle(g, part.labels), abs=1e-12)
    assert -1.0 <= q <= 1.0


def test_relabel_invariance(karate):
    g, truth = karate
    q = modularity(g, Partition.from_labels(truth))
    assert modularity(g, Partition.from_labels(1 - truth)) == pytest.approx(
        q, abs=1e-12
    )


def test_weighted_flag():
    g = WeightedGraph(4, [(0, 1, 5.0), (2, 3, 0.2), (1, 2, 0.1)])
    part = Partition.from_labels([0, 0, 1, 1])
    unit = WeightedGraph.from_pairs(4, [(0, 1), (2, 3), (1, 2)])
    assert modularity(g, part, weighted=False) == pytest.approx(
        modularity(unit, part), abs=1e-12
    )
    assert modularity(g, part) != pytest.approx(
        modularity(g, part, weighted=False), abs=1e-3
    )


def test_modularity_errors():
    empty = WeightedGraph(3, [])
    part = Partition.from_labels([0, 1, 0])
    with pytest.raises(ParameterError):
        modularity(empty, part)
    g = WeightedGraph.from_pairs(4, [(0, 1), (2, 3)])
    with pytest.raises(ParameterError):
        modularity(g, part)


# --------------------------------------------------------- adjacent_pairs


def test_adjacent_single_community_empty(karate):
    g, _ = karate
    part = Partition.from_labels(np.zeros(g.vertex_count, dtype=int))
    assert adjacent_pairs(g, part) == set()


def test_adjacent_path_chain():
    g = WeightedGraph.from_pairs(6, [(i, i + 1) for i in range(5)])
    part = Partition.from_labels([0, 0, 1, 1, 2, 2])
    assert adjacent_pairs(g, part) == {(0, 1), (1, 2)}


@pytest.mark.parametrize("seed", [3, 4, 5])
def test_adjacent_matches_edge_scan(seed):
    g, part = random_case(seed)
    expected = set()
    for u, v in g.edge_pairs():
        a, b = int(part.labels[u]), int(part.labels[v])
        if a != b:
            expected.add((min(a, b), max(a, b)))
    assert adjacent_pairs(g, part) == expected


# ----------------------------------------------------------------- reduce


def test_reduce_identity():
    g, part = chain_of_cliques([3, 4])
    out, trace = reduce_communities(g, part, target=2)
    assert out.labels.tolist() == part.labels.tolist()
    assert trace.steps == ()
    assert trace.evaluations == 0
    assert trace.final_modularity == trace.initial_modularity


def test_reduce_matches_exhaustive_two_options():
    g, part = chain_of_cliques([3, 5, 4])
    candidates = {}
    for a, b in [(0, 1), (1, 2)]:
        merged = part.labels.copy()
        merged[merged == b] = a
        candidates[(a, b)] = modularity_oracle(g, merged)
    best_pair = max(candidates, key=lambda p: (candidates[p], (-p[0], -p[1])))
    out, trace = reduce_communities(g, part, target=2)
    a, b, q = trace.steps[0]
    assert (a, b) == best_pair
    assert q == pytest.approx(candidates[best_pair], abs=1e-12)
    assert out.community_count == 2


def test_reduce_forces_negative_delta_to_target(barbell):
    g, truth = barbell
    part = Partition.from_labels(truth)
    assert modularity(g, part) > 0.4
    out, trace = reduce_communities(g, part, target=1)
    assert out.community_count == 1
    assert trace.merge_count == 1
    assert abs(trace.final_modularity) < 1e-12


def test_reduce_disconnected_merges_two_smallest():
    g = WeightedGraph.from_pairs(7, [(0, 1), (2, 3), (4, 5), (5, 6)])
    part = Partition.from_labels([0, 0, 1, 1, 2, 2, 2])
    assert adjacent_pairs(g, part) == set()
    out, trace = reduce_communities(g, part, target=2)
    assert out.community_count == 2
    assert trace.merge_count == 1
    assert trace.steps[0][:2] == (0, 1)
    assert out.labels[0] == out.labels[2]
    assert out.labels[0] != out.labels[4]
    assert modularity(g, out) == pytest.approx(trace.final_modularity, abs=1e-12)


def test_reduce_trace_replays_to_reported_q():
    g, labels = path_of_cliques(6)
    part = Partition.from_labels(labels)
    out, trace = reduce_communities(g, part, target=2)
    assert trace.merge_count == 4
    replay = part.labels.copy()
    for a, b, q in trace.steps:
        replay[replay == b] = a
        assert modularity_oracle(g, replay) == pytest.approx(q, abs=1e-12)
    assert out.community_count == 2
    assert modularity(g, out) == pytest.approx(trace.final_modularity, abs=1e-12)


def test_reduce_respects_evaluation_budget():
    g, labels = path_of_cliques(30)
    part = Partition.from_labels(labels)
    out, trace = reduce_communities(g, part, target=2)
    bound = MergeTrace.evaluation_bound(30, 2)
    assert bound == 462
    assert trace.evaluations <= bound
    # The chain is sparse: most community pairs are never adjacent.
    assert trace.evaluations < bound
    assert out.community_count == 2
    assert trace.merge_count == 28


def test_evaluation_bound_closed_form():
    for k, c in [(30, 2), (5, 5), (10, 1), (7, 3)]:
        assert MergeTrace.evaluation_bound(k, c) == sum(range(c + 1, k + 1))


def test_reduce_evaluations_equal_initial_adjacency():
    # Connected graph, so no fallback merges: later rounds derive every
    # candidate from the cache and only the first scan counts.
    g, _ = path_of_cliques(8)
    rng = np.random.default_rng(3)
    for kk, target in [(8, 1), (8, 4), (5, 2)]:
        part = Partition.from_labels(rng.integers(0, kk, size=g.vertex_count))
        _, trace = reduce_communities(g, part, target)
        assert trace.evaluations == len(adjacent_pairs(g, part))
        assert trace.evaluations <= MergeTrace.evaluation_bound(
            part.community_count, target
        )


def test_reduce_target_out_of_range():
    g, part = chain_of_cliques([3, 3])
    with pytest.raises(ParameterError):
        reduce_communities(g, part, target=0)
    with pytest.raises(ParameterError):
        reduce_communities(g, part, target=3)


def test_trace_json_steps():
    g, labels = path_of_cliques(3)
    out, trace = reduce_communities(g, Partition.from_labels(labels), target=1)
    rows = trace.to_json_steps()
    assert len(rows) == 2
    assert set(rows[0]) == {"a", "b", "q"}
    assert rows[-1]["q"] == pytest.approx(0.0, abs=1e-12)
    assert out.provenance is trace
