"""Weighted modularity and greedy merging down to a target community count."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .community import Partition
from .errors import ParameterError
from .graph import WeightedGraph


@dataclass(frozen=True)
class MergeTrace:
    """Record of one reduction: committed merges as (a, b, modularity-after)
    in the input partition's label space (a absorbs b), the starting
    modularity, and how many candidate merges had their quality computed."""

    steps: tuple[tuple[int, int, float], ...]
    initial_modularity: float
    evaluations: int

    @property
    def merge_count(self) -> int:
        return len(self.steps)

    @property
    def final_modularity(self) -> float:
        return self.steps[-1][2] if self.steps else self.initial_modularity

    @staticmethod
    def evaluation_bound(initial_count: int, final_count: int) -> int:
        """(K - C)(K + C + 1) / 2, the candidate-evaluation budget for
        reducing K communities to C."""
        k, c = initial_count, final_count
        return (k - c) * (k + c + 1) // 2

    def to_json_steps(self) -> list[dict]:
        return [{"a": a, "b": b, "q": q} for a, b, q in self.steps]


def _edge_weights(g: WeightedGraph, weighted: bool) -> np.ndarray:
    return g.weights if weighted else np.ones_like(g.weights)


def _aggregates(
    g: WeightedGraph, labels: np.ndarray, count: int, weighted: bool
) -> tuple[float, np.ndarray, np.ndarray]:
    """Total weight m, per-community internal weight, per-community degree."""
    w = _edge_weights(g, weighted)
    m = float(w.sum())
    lu = labels[g.edges_u]
    lv = labels[g.edges_v]
    same = lu == lv
    intra = np.bincount(lu[same], weights=w[same], minlength=count)
    deg = np.bincount(lu, weights=w, minlength=count) + np.bincount(
        lv, weights=w, minlength=count
    )
    return m, intra, deg


def modularity(g: WeightedGraph, partition: Partition, weighted: bool = True) -> float:
    """Newman-Girvan modularity: sum_c [ intra_c / m - (deg_c / 2m)^2 ]."""
    if g.edge_count == 0:
        raise ParameterError("modularity is undefined on a graph with no edges")
    if partition.labels.size != g.vertex_count:
        raise ParameterError("partition does not label every vertex")
    m, intra, deg = _aggregates(
        g, partition.labels, partition.community_count, weighted
    )
    return float((intra / m - (deg / (2.0 * m)) ** 2).sum())


def adjacent_pairs(g: WeightedGraph, partition: Partition) -> set[tuple[int, int]]:
    """Community pairs (a < b) connected by at least one edge."""
    if partition.labels.size != g.vertex_count:
        raise ParameterError("partition does not label every vertex")
    lu = partition.labels[g.edges_u]
    lv = partition.labels[g.edges_v]
    cross = lu != lv
    return {
        (min(a, b), max(a, b))
        for a, b in zip(lu[cross].tolist(), lv[cross].tolist())
    }


def reduce_communities(
    g: WeightedGraph, partition: Partition, target: int, weighted: bool = True
) -> tuple[Partition, MergeTrace]:
    """Greedily merge adjacent communities until exactly `target` remain.

    Each round considers the modularity delta of every adjacent pair and
    commits the best one, ties going to the lexicographically smallest pair.
    Deltas are evaluated from the community aggregates once per pair; after a
    merge the combined community's deltas derive additively from the two
    absorbed entries (dq(a+b, x) = dq(a, x) + dq(b, x)), so no candidate is
    re-evaluated.  Merges proceed even when every delta is negative.  If no
    two remaining communities are adjacent, the two smallest by vertex count
    are merged.
    """
    if g.edge_count == 0:
        raise ParameterError("cannot reduce communities on a graph with no edges")
    count = partition.community_count
    if not (1 <= target <= count):
        raise ParameterError(
            f"target must lie in 1..{count} (current community count), got {target}"
        )

    labels = partition.labels.copy()
    m, intra, deg = _aggregates(g, labels, count, weighted)
    w = _edge_weights(g, weighted)
    sizes = np.bincount(labels, minlength=count).astype(np.int64)

    cut: dict[tuple[int, int], float] = {}
    lu = labels[g.edges_u]
    lv = labels[g.edges_v]
    for a, b, wt in zip(lu.tolist(), lv.tolist(), w.tolist()):
        if a != b:
            key = (min(a, b), max(a, b))
            cut[key] = cut.get(key, 0.0) + wt
    adj: dict[int, set[int]] = {c: set() for c in range(count)}
    for a, b in cut:
        adj[a].add(b)
        adj[b].add(a)

    q = float((intra / m - (deg / (2.0 * m)) ** 2).sum())
    initial_q = q
    alive = set(range(count))
    cache: dict[tuple[int, int], float] = {}
    evaluations = 0
    steps: list[tuple[int, int, float]] = []

    def delta_q(a: int, b: int) -> float:
        # Merging a and b only adds the cross weight and the degree product.
        return cut[(a, b)] / m - deg[a] * deg[b] / (2.0 * m * m)

    while len(alive) > target:
        best_pair: tuple[int, int] | None = None
        best_dq = -np.inf
        for pair in sorted(cut):
            dq = cache.get(pair)
            if dq is None:
                dq = delta_q(*pair)
                cache[pair] = dq
                evaluations += 1
            if dq > best_dq:
                best_dq = dq
                best_pair = pair

        if best_pair is None:
            # Disconnected remainder: merge the two smallest communities.
            a, b = sorted(alive, key=lambda c: (sizes[c], c))[:2]
            a, b = min(a, b), max(a, b)
            best_dq = -deg[a] * deg[b] / (2.0 * m * m)
            evaluations += 1
            best_pair = (a, b)
            cross = 0.0
        else:
            a, b = best_pair
            cross = cut.pop(best_pair)

        # The merged community's deltas derive from the absorbed pair's
        # entries; a side that was not adjacent to x contributes only its
        # degree penalty.  Uses the pre-merge degrees.
        derived: dict[int, float] = {}
        for x in (adj[a] | adj[b]) - {a, b}:
            ka = (min(a, x), max(a, x))
            kb = (min(b, x), max(b, x))
            da = cache[ka] if ka in cache else -deg[a] * deg[x] / (2.0 * m * m)
            db = cache[kb] if kb in cache else -deg[b] * deg[x] / (2.0 * m * m)
            derived[x] = da + db

        # Commit: a absorbs b.
        intra[a] += intra[b] + cross
        deg[a] += deg[b]
        sizes[a] += sizes[b]
        for x in list(adj[b]):
            adj[x].discard(b)
            if x == a:
                continue
            old = cut.pop((min(b, x), max(b, x)))
            key = (min(a, x), max(a, x))
            cut[key] = cut.get(key, 0.0) + old
            adj[a].add(x)
            adj[x].add(a)
        adj.pop(b)
        cache = {
            pair: dq for pair, dq in cache.items() if a not in pair and b not in pair
        }
        for x, dq in derived.items():
            cache[(min(a, x), max(a, x))] = dq
        alive.discard(b)
        labels[labels == b] = a
        q += best_dq
        steps.append((a, b, q))

    trace = MergeTrace(
        steps=tuple(steps), initial_modularity=initial_q, evaluations=evaluations
    )
    return Partition.from_labels(labels, provenance=trace), trace
