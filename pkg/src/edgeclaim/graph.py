"""Weighted undirected graphs, k-NN construction, and neighborhood queries."""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import DataError, ParameterError

WEIGHTINGS = ("gaussian", "unit", "inverse")


@dataclass(frozen=True)
class PointDataset:
    """Points in d-dimensional space, one row per point, with optional integer labels."""

    points: np.ndarray
    labels: np.ndarray | None = None

    def __post_init__(self) -> None:
        try:
            pts = np.asarray(self.points, dtype=np.float64)
        except ValueError:
            raise ParameterError("points must form a rectangular numeric array") from None
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ParameterError("points must be a non-empty 2-D array")
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=np.int64)
            if lab.shape != (pts.shape[0],):
                raise ParameterError("labels length must match the number of points")
            object.__setattr__(self, "labels", lab)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1]


class WeightedGraph:
    """Undirected graph with strictly positive edge weights.

    Edges are stored once as (u, v) pairs with u < v, sorted lexicographically.
    Each edge e also exists as two directed "slots": slot 2e is u -> v and
    slot 2e + 1 is v -> u.  The slot arrays (`slot_src`, `slot_dst`,
    `slot_walk`) carry the plain weighted-walk probabilities
    w_ij / sum_k w_ik and are what the dynamics iterates over.  Treat all
    arrays as read-only.
    """

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int, float]]):
        if vertex_count < 1:
            raise ParameterError("vertex_count must be >= 1")
        self.vertex_count = int(vertex_count)

        canon: dict[tuple[int, int], float] = {}
        for i, j, w in edges:
            i, j, w = int(i), int(j), float(w)
            if i == j:
                raise ParameterError(f"self loop at vertex {i}")
            if not (0 <= i < vertex_count and 0 <= j < vertex_count):
                raise ParameterError(f"edge ({i}, {j}) out of range for {vertex_count} vertices")
            if not (w > 0.0) or not math.isfinite(w):
                raise ParameterError(f"edge ({i}, {j}) has non-positive weight {w}")
            key = (min(i, j), max(i, j))
            if key in canon:
                raise ParameterError(f"duplicate edge ({key[0]}, {key[1]})")
            canon[key] = w

        pairs = sorted(canon)
        self.edges_u = np.array([p[0] for p in pairs], dtype=np.int64)
        self.edges_v = np.array([p[1] for p in pairs], dtype=np.int64)
        self.weights = np.array([canon[p] for p in pairs], dtype=np.float64)
        e = len(pairs)
        self.edge_count = e

        self.slot_src = np.empty(2 * e, dtype=np.int64)
        self.slot_dst = np.empty(2 * e, dtype=np.int64)
        self.slot_src[0::2] = self.edges_u
        self.slot_src[1::2] = self.edges_v
        self.slot_dst[0::2] = self.edges_v
        self.slot_dst[1::2] = self.edges_u
        slot_w = np.repeat(self.weights, 2)

        self.strength = np.bincount(
            self.slot_src, weights=slot_w, minlength=self.vertex_count
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            self.slot_walk = np.where(
                self.strength[self.slot_src] > 0,
                slot_w / self.strength[self.slot_src],
                0.0,
            )

        # Group slots by source vertex for adjacency queries.
        order = np.argsort(self.slot_src, kind="stable")
        self._slot_order = order
        self._slot_starts = np.searchsorted(
            self.slot_src[order], np.arange(self.vertex_count + 1)
        )

    def vertex_slots(self, i: int) -> np.ndarray:
        """Slot indices whose source is vertex i."""
        self._check_vertex(i)
        return self._slot_order[self._slot_starts[i] : self._slot_starts[i + 1]]

    def neighbors(self, i: int) -> np.ndarray:
        return self.slot_dst[self.vertex_slots(i)]

    def degree(self, i: int) -> int:
        self._check_vertex(i)
        return int(self._slot_starts[i + 1] - self._slot_starts[i])

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self._slot_starts)

    @cached_property
    def isolated_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.degrees == 0)

    @cached_property
    def _pair_index(self) -> dict[tuple[int, int], int]:
        return {
            (int(u), int(v)): e
            for e, (u, v) in enumerate(zip(self.edges_u, self.edges_v))
        }

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self._pair_index

    def edge_index(self, i: int, j: int) -> int:
        key = (min(int(i), int(j)), max(int(i), int(j)))
        try:
            return self._pair_index[key]
        except KeyError:
            raise KeyError(f"no edge between {i} and {j}") from None

    def weight(self, i: int, j: int) -> float:
        return float(self.weights[self.edge_index(i, j)])

    def edge_pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.edges_u.tolist(), self.edges_v.tolist()))

    def _check_vertex(self, i: int) -> None:
        if not (0 <= i < self.vertex_count):
            raise IndexError(f"vertex {i} out of range for {self.vertex_count} vertices")

    @classmethod
    def from_pairs(
        cls, vertex_count: int, pairs: Iterable[tuple[int, int]], weight: float = 1.0
    ) -> WeightedGraph:
        return cls(vertex_count, [(i, j, weight) for i, j in pairs])

    @classmethod
    def from_edge_list(cls, path: str | Path) -> WeightedGraph:
        """Read the `i j w` text format; `#` starts a comment, blank lines ignored."""
        edges = []
        max_vertex = -1
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise DataError(f"{path}: {exc.strerror or exc}") from None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise DataError(f"{path}:{lineno}: expected 'i j w', got {raw!r}")
            try:
                i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError:
                raise DataError(f"{path}:{lineno}: non-numeric field in {raw!r}") from None
            edges.append((i, j, w))
            max_vertex = max(max_vertex, i, j)
        if not edges:
            raise DataError(f"{path}: no edges found")
        try:
            return cls(max_vertex + 1, edges)
        except ParameterError as exc:
            raise DataError(f"{path}: {exc}") from None

    def to_edge_list(self, path: str | Path) -> None:
        lines = [
            f"{u} {v} {w!r}"
            for u, v, w in zip(
                self.edges_u.tolist(), self.edges_v.tolist(), self.weights.tolist()
            )
        ]
        Path(path).write_text("\n".join(lines) + "\n")

    def __repr__(self) -> str:
        return f"WeightedGraph(vertices={self.vertex_count}, edges={self.edge_count})"


def build_knn_graph(
    data: PointDataset | np.ndarray, k: int, weighting: str = "gaussian"
) -> WeightedGraph:
    """Build the symmetrized k-nearest-neighbor graph of a point set.

    Parameters
    ----------
    data : PointDataset or (n, d) array
        Input points.
    k : int
        Number of neighbors per point, 1 <= k < n.  Distance ties are broken
        toward the smaller point index, which makes the construction
        deterministic.
    weighting : {"gaussian", "unit", "inverse"}
        Edge weight as a function of the point distance d:
        exp(-d^2 / (2 sigma^2)) with sigma the mean k-th-neighbor distance
        (all-ones when sigma is zero), constant 1, or 1 / (1 + d).

    Returns
    -------
    WeightedGraph
        Union-symmetrized graph: {i, j} is an edge when i is among j's
        k nearest or vice versa, so every vertex has degree >= k.
    """
    if not isinstance(data, PointDataset):
        data = PointDataset(np.asarray(data))
    if weighting not in WEIGHTINGS:
        raise ParameterError(f"weighting must be one of {WEIGHTINGS}, got {weighting!r}")
    n = len(data)
    if n < 2:
        raise ParameterError("k-NN graph needs at least 2 points")
    if not (1 <= k < n):
        raise ParameterError(f"k must satisfy 1 <= k < n = {n}, got {k}")

    x = data.points
    sq_norm = np.einsum("ij,ij->i", x, x)
    sq = sq_norm[:, None] + sq_norm[None, :] - 2.0 * (x @ x.T)
    np.maximum(sq, 0.0, out=sq)
    dist = np.sqrt(sq)

    idx = np.arange(n)
    kth = np.empty(n)
    chosen: dict[tuple[int, int], float] = {}
    for i in range(n):
        order = np.lexsort((idx, dist[i]))
        order = order[order != i][:k]
        kth[i] = dist[i, order[-1]]
        for j in order.tolist():
            key = (min(i, j), max(i, j))
            chosen.setdefault(key, float(dist[i, j]))

    pairs = sorted(chosen)
    d = np.array([chosen[p] for p in pairs])
    if weighting == "unit":
        w = np.ones_like(d)
    elif weighting == "inverse":
        w = 1.0 / (1.0 + d)
    else:
        sigma = float(kth.mean())
        w = np.ones_like(d) if sigma == 0.0 else np.exp(-(d**2) / (2.0 * sigma**2))

    return WeightedGraph(n, [(u, v, float(wt)) for (u, v), wt in zip(pairs, w)])


def neighborhood_vertices(g, j: int, order: int) -> set[int]:
    """Vertices within `order` hops of j (j included).  Works on any object
    exposing `vertex_count` and `neighbors(v)`, i.e. graphs and unfoldings."""
    if order < 1:
        raise ParameterError(f"neighborhood order must be >= 1, got {order}")
    if not (0 <= j < g.vertex_count):
        raise IndexError(f"vertex {j} out of range for {g.vertex_count} vertices")
    seen = {int(j)}
    frontier = deque([(int(j), 0)])
    while frontier:
        v, depth = frontier.popleft()
        if depth == order:
            continue
        for u in g.neighbors(v).tolist():
            if u not in seen:
                seen.add(u)
                frontier.append((u, depth + 1))
    return seen


def induced_edge_count(g, vertices: Iterable[int]) -> int:
    """Number of edges of g with both endpoints in `vertices`."""
    inside = set(int(v) for v in vertices)
    for v in inside:
        if not (0 <= v < g.vertex_count):
            raise IndexError(f"vertex {v} out of range for {g.vertex_count} vertices")
    twice = sum(
        sum(1 for u in g.neighbors(v).tolist() if u in inside) for v in inside
    )
    return twice // 2
