"""Per-class edge unfoldings and density-based community assignment.

After a run, every edge is claimed by the class with the largest two-way
flow across it, splitting the graph into K unfoldings.  A vertex j then
scores each class by the number of edges inside its order-o neighborhood
*within that class's unfolding*, normalized across classes, and joins the
class with the highest score.  Vertices with no nearby claimed edges are
filled in afterwards by neighbor majority.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from .errors import DegenerateStateError, ParameterError
from .graph import WeightedGraph, induced_edge_count, neighborhood_vertices

if TYPE_CHECKING:
    from .dynamics import SystemState
    from .modularity import MergeTrace


@dataclass(frozen=True)
class Unfolding:
    """The subgraph of edges claimed by one class (unweighted view)."""

    graph: WeightedGraph
    class_id: int
    edge_ids: np.ndarray

    def __post_init__(self) -> None:
        ids = np.asarray(self.edge_ids, dtype=np.int64)
        object.__setattr__(self, "edge_ids", ids)
        adj: list[list[int]] = [[] for _ in range(self.graph.vertex_count)]
        for e in ids.tolist():
            u = int(self.graph.edges_u[e])
            v = int(self.graph.edges_v[e])
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(
            self, "_adj", tuple(np.array(a, dtype=np.int64) for a in adj)
        )

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    @property
    def edge_count(self) -> int:
        return int(self.edge_ids.size)

    def neighbors(self, i: int) -> np.ndarray:
        if not (0 <= i < self.vertex_count):
            raise IndexError(f"vertex {i} out of range for {self.vertex_count} vertices")
        return self._adj[i]

    def edge_pairs(self) -> list[tuple[int, int]]:
        return [
            (int(self.graph.edges_u[e]), int(self.graph.edges_v[e]))
            for e in self.edge_ids.tolist()
        ]


@dataclass(frozen=True)
class Partition:
    """Vertex labels, contiguous in [0, community_count)."""

    labels: np.ndarray
    community_count: int
    provenance: "MergeTrace | None" = None

    def __post_init__(self) -> None:
        lab = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "labels", lab)
        if lab.ndim != 1 or lab.size == 0:
            raise ParameterError("labels must be a non-empty 1-D array")
        present = np.unique(lab)
        if (
            present.size != self.community_count
            or present[0] != 0
            or present[-1] != self.community_count - 1
        ):
            raise ParameterError(
                f"labels must cover 0..{self.community_count - 1} exactly"
            )

    @classmethod
    def from_labels(cls, raw, provenance: "MergeTrace | None" = None) -> "Partition":
        """Compact arbitrary labels to contiguous ids (sorted label order)."""
        values, inverse = np.unique(np.asarray(raw, dtype=np.int64), return_inverse=True)
        return cls(inverse.astype(np.int64), int(values.size), provenance)


def unfold(g: WeightedGraph, state: "SystemState") -> list[Unfolding]:
    """Split the edge set by dominating class: argmax over classes of the
    two-way flow, ties and flowless edges going to the lowest class index."""
    und = state.flows[:, 0::2] + state.flows[:, 1::2]
    winner = np.argmax(und, axis=0)
    return [
        Unfolding(graph=g, class_id=c, edge_ids=np.flatnonzero(winner == c))
        for c in range(state.class_count)
    ]


def _score_row(unfoldings: list[Unfolding], j: int, order: int) -> np.ndarray:
    counts = np.array(
        [
            induced_edge_count(u, neighborhood_vertices(u, j, order))
            for u in unfoldings
        ],
        dtype=np.float64,
    )
    total = counts.sum()
    return counts / total if total > 0 else counts


def density_scores(unfoldings: list[Unfolding], j: int, order: int) -> np.ndarray:
    """Per-class neighborhood edge-density scores of vertex j; a zero row
    means j is unresolved (no claimed edges within reach in any class)."""
    if not unfoldings:
        raise ParameterError("need at least one unfolding")
    return _score_row(unfoldings, j, order)


def assign_communities(unfoldings: list[Unfolding], order: int) -> Partition:
    """Label every vertex by its best density score; fill unresolved vertices
    by majority vote of already-labeled graph neighbors, in BFS order from
    the resolved ones."""
    if not unfoldings:
        raise ParameterError("need at least one unfolding")
    g = unfoldings[0].graph
    n = g.vertex_count
    scores = np.stack([_score_row(unfoldings, j, order) for j in range(n)])
    resolved = scores.sum(axis=1) > 0.0
    if not resolved.any():
        raise DegenerateStateError(
            "all vertices unresolved (no claimed edges); run the dynamics first"
        )

    labels = np.full(n, -1, dtype=np.int64)
    labels[resolved] = np.argmax(scores[resolved], axis=1)

    queue = deque(np.flatnonzero(resolved).tolist())
    visited = set(queue)
    while queue:
        v = queue.popleft()
        for u in sorted(g.neighbors(v).tolist()):
            if u in visited:
                continue
            visited.add(u)
            votes = Counter(
                int(labels[w]) for w in g.neighbors(u).tolist() if labels[w] >= 0
            )
            best = max(votes.items(), key=lambda kv: (kv[1], -kv[0]))[0]
            labels[u] = best
            queue.append(u)
    if (labels < 0).any():
        missing = int(np.flatnonzero(labels < 0)[0])
        raise DegenerateStateError(
            f"vertex {missing} cannot be labeled: unreachable from any resolved vertex"
        )
    return Partition.from_labels(labels)


def write_partition_csv(partition: Partition, path: str | Path) -> None:
    lines = ["vertex,label"]
    lines += [f"{v},{int(lab)}" for v, lab in enumerate(partition.labels.tolist())]
    Path(path).write_text("\n".join(lines) + "\n")


def write_unfoldings(unfoldings: list[Unfolding], path: str | Path) -> None:
    """Edge list per class, each block headed by `# class c`."""
    lines = []
    for u in unfoldings:
        lines.append(f"# class {u.class_id}")
        lines += [f"{a} {b}" for a, b in u.edge_pairs()]
    Path(path).write_text("\n".join(lines) + "\n")
