"""End-to-end clustering: dynamics -> unfoldings -> communities -> reduction,
plus deterministic parameter sweeps."""

from __future__ import annotations

import sys
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import product
from typing import NamedTuple

import numpy as np

from .community import Partition, assign_communities, unfold
from .dynamics import CompetitionConfig, SystemState, run
from .errors import DegenerateStateError, ParameterError
from .evaluate import adjusted_rand_index
from .graph import PointDataset, WeightedGraph, build_knn_graph
from .modularity import MergeTrace, reduce_communities


@dataclass(frozen=True)
class PipelineConfig:
    """Parameters of one clustering run.  class_count over-estimates the
    cluster count and must be >= target_clusters."""

    competition: CompetitionConfig
    order: int = 1
    target_clusters: int = 2
    knn_k: int | None = None
    weighting: str = "gaussian"
    unweighted_q: bool = False

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ParameterError(f"order must be >= 1, got {self.order}")
        if self.target_clusters < 1:
            raise ParameterError(
                f"target_clusters must be >= 1, got {self.target_clusters}"
            )
        if self.competition.class_count < self.target_clusters:
            raise ParameterError(
                f"class_count {self.competition.class_count} is smaller than "
                f"target_clusters {self.target_clusters}"
            )


class ClusterResult(NamedTuple):
    partition: Partition
    trace: MergeTrace
    state: SystemState


def cluster(g: WeightedGraph, cfg: PipelineConfig) -> ClusterResult:
    """Run the full pipeline on a graph; the result has exactly
    cfg.target_clusters communities."""
    state = run(g, cfg.competition)
    unfoldings = unfold(g, state)
    initial = assign_communities(unfoldings, cfg.order)
    if initial.community_count < cfg.target_clusters:
        raise DegenerateStateError(
            f"assignment produced {initial.community_count} communities, "
            f"fewer than the {cfg.target_clusters} requested"
        )
    partition, trace = reduce_communities(
        g, initial, cfg.target_clusters, weighted=not cfg.unweighted_q
    )
    return ClusterResult(partition=partition, trace=trace, state=state)


def cluster_points(data: PointDataset, cfg: PipelineConfig) -> ClusterResult:
    if cfg.knn_k is None:
        raise ParameterError("knn_k is required to cluster raw points")
    g = build_knn_graph(data, cfg.knn_k, cfg.weighting)
    return cluster(g, cfg)


@dataclass(frozen=True)
class SweepGrid:
    """Grid of sweep cells.  knn_values is None when the input is already a
    graph; every other list must be nonempty."""

    class_count_values: tuple[int, ...]
    order_values: tuple[int, ...]
    seeds: tuple[int, ...]
    knn_values: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        for name in ("class_count_values", "order_values", "seeds"):
            vals = tuple(int(v) for v in getattr(self, name))
            if not vals:
                raise ParameterError(f"{name} must be nonempty")
            object.__setattr__(self, name, vals)
        if self.knn_values is not None:
            vals = tuple(int(v) for v in self.knn_values)
            if not vals:
                raise ParameterError("knn_values must be nonempty or None")
            object.__setattr__(self, "knn_values", vals)


@dataclass(frozen=True)
class SweepResult:
    knn: int | None
    class_count: int
    order: int
    seed: int
    ari: float | None
    modularity: float
    partition: Partition


def cell_seed(base: int, knn: int | None, class_count: int, order: int) -> int:
    """Per-cell RNG seed: the base seed XOR a stable hash of the cell
    parameters, so cells are independent yet reproducible in any order."""
    tag = f"{knn}|{class_count}|{order}".encode()
    return (int(base) ^ zlib.crc32(tag)) & (2**64 - 1)


def _run_cell(args) -> SweepResult | None:
    g, knn, class_count, order, seed, target, base_cfg, truth = args
    comp = replace(
        base_cfg.competition,
        class_count=class_count,
        seed=cell_seed(seed, knn, class_count, order),
        seed_vertices=None,
    )
    cfg = replace(
        base_cfg, competition=comp, order=order, knn_k=None
    )
    try:
        result = cluster(g, cfg)
    except (DegenerateStateError, ParameterError) as exc:
        print(
            f"sweep: skipping cell knn={knn} K={class_count} o={order} "
            f"seed={seed}: {exc}",
            file=sys.stderr,
        )
        return None
    ari = (
        adjusted_rand_index(truth, result.partition.labels)
        if truth is not None
        else None
    )
    return SweepResult(
        knn=knn,
        class_count=class_count,
        order=order,
        seed=seed,
        ari=ari,
        modularity=result.trace.final_modularity,
        partition=result.partition,
    )


def sweep(
    data: PointDataset | WeightedGraph,
    grid: SweepGrid,
    target: int,
    base_cfg: PipelineConfig | None = None,
    truth: np.ndarray | None = None,
    compute_ari: bool = True,
    jobs: int = 1,
) -> list[SweepResult]:
    """Cluster once per grid cell and return results sorted by ARI descending
    (then by parameters).  Cells that degenerate are skipped with a warning.

    Ground truth defaults to the point dataset's labels; requesting ARI
    without any truth is an error.
    """
    if base_cfg is None:
        base_cfg = PipelineConfig(
            competition=CompetitionConfig(class_count=max(target, 2)),
            target_clusters=target,
        )
    if base_cfg.target_clusters != target:
        base_cfg = replace(base_cfg, target_clusters=target)

    if isinstance(data, WeightedGraph):
        if grid.knn_values is not None:
            raise ParameterError("knn_values do not apply to graph input")
        graphs: dict[int | None, WeightedGraph] = {None: data}
        knn_values: tuple[int | None, ...] = (None,)
    else:
        if grid.knn_values is None:
            raise ParameterError("knn_values are required for point input")
        if truth is None:
            truth = data.labels
        knn_values = grid.knn_values
        graphs = {
            k: build_knn_graph(data, k, base_cfg.weighting) for k in knn_values
        }
    if compute_ari and truth is None:
        raise ParameterError("ARI requested but no ground-truth labels available")
    if not compute_ari:
        truth = None

    cells = [
        (graphs[knn], knn, kc, o, s, target, base_cfg, truth)
        for knn, kc, o, s in product(
            knn_values, grid.class_count_values, grid.order_values, grid.seeds
        )
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(_run_cell, cells))
    else:
        raw = [_run_cell(c) for c in cells]
    results = [r for r in raw if r is not None]

    def sort_key(r: SweepResult):
        ari = -np.inf if r.ari is None else r.ari
        return (-ari, r.knn if r.knn is not None else -1, r.class_count, r.order, r.seed)

    return sorted(results, key=sort_key)


def best_result(results: list[SweepResult]) -> SweepResult:
    """Best cell by final modularity (a label-free criterion), ties broken by
    parameter order."""
    if not results:
        raise ParameterError("no sweep results to choose from")
    return sorted(
        results,
        key=lambda r: (
            -r.modularity,
            r.knn if r.knn is not None else -1,
            r.class_count,
            r.order,
            r.seed,
        ),
    )[0]
