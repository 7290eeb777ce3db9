"""Shared fixtures and brute-force oracles.

The oracles here recompute quantities by direct definition (double loops,
explicit pair counting) so the vectorized implementations are checked
against an independent route.
"""

from __future__ import annotations

import numpy as np
import pytest

from edgeclaim import WeightedGraph, karate_club


def modularity_oracle(g: WeightedGraph, labels) -> float:
    """Q by the definitional double sum over all vertex pairs."""
    labels = np.asarray(labels)
    n = g.vertex_count
    A = np.zeros((n, n))
    for e in range(g.edge_count):
        u, v, w = int(g.edges_u[e]), int(g.edges_v[e]), float(g.weights[e])
        A[u, v] = A[v, u] = w
    k = A.sum(axis=1)
    two_m = A.sum()
    q = 0.0
    for i in range(n):
        for j in range(n):
            if labels[i] == labels[j]:
                q += A[i, j] - k[i] * k[j] / two_m
    return q / two_m


def ari_pair_oracle(a, b) -> float:
    """ARI by explicit agreement counting over all vertex pairs."""
    a, b = np.asarray(a), np.asarray(b)
    n = len(a)
    n11 = n00 = n10 = n01 = 0
    for i in range(n):
        for j in range(i + 1, n):
            same_a = a[i] == a[j]
            same_b = b[i] == b[j]
            if same_a and same_b:
                n11 += 1
            elif same_a:
                n10 += 1
            elif same_b:
                n01 += 1
            else:
                n00 += 1
    num = 2.0 * (n11 * n00 - n10 * n01)
    den = (n11 + n10) * (n10 + n00) + (n11 + n01) * (n01 + n00)
    if den == 0:
        return 1.0
    return num / den


def path_of_cliques(clique_count: int, size: int = 5) -> tuple[WeightedGraph, np.ndarray]:
    """A chain of `clique_count` cliques of `size` vertices, one bridge edge
    between consecutive cliques.  Returns the graph and per-vertex clique ids."""
    pairs = []
    for b in range(clique_count):
        base = b * size
        for i in range(base, base + size):
            for j in range(i + 1, base + size):
                pairs.append((i, j))
        if b:
            pairs.append((base - 1, base))
    labels = np.repeat(np.arange(clique_count), size)
    return WeightedGraph.from_pairs(clique_count * size, pairs, weight=1.0), labels


@pytest.fixture(scope="session")
def karate():
    ds = karate_club()
    return ds.payload, np.asarray(ds.ground_truth)


@pytest.fixture(scope="session")
def barbell():
    """Two 5-cliques (vertices 0-4 and 5-9) joined by the bridge (4,5)."""
    g, labels = path_of_cliques(2, size=5)
    return g, labels
