"""Community detection and data clustering via competing particle classes
that claim graph edges."""

from __future__ import annotations

__version__ = "0.1.0"

from .community import (
    Partition,
    Unfolding,
    assign_communities,
    density_scores,
    unfold,
    write_partition_csv,
    write_unfoldings,
)
from .data import NamedDataset, generate, karate_club, load_csv, save_points_csv
from .dynamics import (
    CONVERGENCE_WINDOW,
    ClassTransition,
    CompetitionConfig,
    SystemState,
    build_transition,
    initial_state,
    load_state,
    run,
    save_state,
    state_from_json,
    state_to_json,
    step,
    subordination,
)
from .errors import DataError, DegenerateStateError, ParameterError, SimulationError
from .evaluate import (
    EvalReport,
    FriedmanResult,
    adjusted_rand_index,
    bonferroni_dunn_cd,
    build_report,
    friedman,
    rank_table,
)
from .graph import (
    PointDataset,
    WeightedGraph,
    build_knn_graph,
    induced_edge_count,
    neighborhood_vertices,
)
from .modularity import MergeTrace, adjacent_pairs, modularity, reduce_communities
from .pipeline import (
    ClusterResult,
    PipelineConfig,
    SweepGrid,
    SweepResult,
    best_result,
    cell_seed,
    cluster,
    cluster_points,
    sweep,
)
from .stochastic import StochasticState, StepRecord, draw_regeneration, stochastic_run

__all__ = [
    "CONVERGENCE_WINDOW",
    "ClassTransition",
    "ClusterResult",
    "CompetitionConfig",
    "DataError",
    "DegenerateStateError",
    "EvalReport",
    "FriedmanResult",
    "MergeTrace",
    "NamedDataset",
    "ParameterError",
    "Partition",
    "PipelineConfig",
    "PointDataset",
    "SimulationError",
    "StepRecord",
    "StochasticState",
    "SweepGrid",
    "SweepResult",
    "SystemState",
    "Unfolding",
    "WeightedGraph",
    "adjacent_pairs",
    "adjusted_rand_index",
    "assign_communities",
    "best_result",
    "bonferroni_dunn_cd",
    "build_knn_graph",
    "build_report",
    "build_transition",
    "cell_seed",
    "cluster",
    "cluster_points",
    "density_scores",
    "draw_regeneration",
    "friedman",
    "generate",
    "induced_edge_count",
    "initial_state",
    "karate_club",
    "load_csv",
    "load_state",
    "modularity",
    "neighborhood_vertices",
    "rank_table",
    "reduce_communities",
    "run",
    "save_points_csv",
    "save_state",
    "state_from_json",
    "state_to_json",
    "step",
    "stochastic_run",
    "subordination",
    "sweep",
    "unfold",
    "write_partition_csv",
    "write_unfoldings",
]
