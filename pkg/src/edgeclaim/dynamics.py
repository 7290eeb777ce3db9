"""Deterministic competition dynamics over graph edges.

K particle classes walk a weighted graph.  Class c moves from i to j with
the weighted-walk probability w_ij / sum_k w_ik scaled by a survival factor
1 - lambda * sigma^c_ij, where sigma^c_ij is the share of the edge's recent
traffic owned by the other classes (1/K on edges with no traffic yet).
Each step evolves, per class, the vertex mass distribution nu (renormalized
so absorbed mass is regenerated proportionally) and the directed edge flows
n^c_ij = nu^c_i * p^c_ij, synchronously from the previous state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateStateError, ParameterError, SimulationError
from .graph import WeightedGraph

# A run stops early once the L1 change of nu stays below tol for this many
# consecutive steps.
CONVERGENCE_WINDOW = 10


@dataclass(frozen=True)
class CompetitionConfig:
    """Parameters of one dynamics run."""

    class_count: int
    lam: float = 0.5
    max_steps: int = 500
    tol: float = 1e-8
    seed: int = 0
    seed_vertices: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.class_count < 1:
            raise ParameterError(f"class_count must be >= 1, got {self.class_count}")
        if not (0.0 <= self.lam <= 1.0):
            raise ParameterError(f"lam must lie in [0, 1], got {self.lam}")
        if self.max_steps < 1:
            raise ParameterError(f"max_steps must be >= 1, got {self.max_steps}")
        if not (self.tol > 0.0):
            raise ParameterError(f"tol must be > 0, got {self.tol}")
        if not (0 <= self.seed < 2**64):
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.seed_vertices is not None:
            sv = tuple(int(v) for v in self.seed_vertices)
            if len(sv) != self.class_count:
                raise ParameterError("seed_vertices must list one vertex per class")
            if len(set(sv)) != len(sv):
                raise ParameterError("seed_vertices must be distinct")
            object.__setattr__(self, "seed_vertices", sv)


@dataclass(frozen=True)
class SystemState:
    """State after `step` steps: per-class vertex mass and directed edge flows.

    nu has shape (K, n).  flows has shape (K, 2E) in the graph's slot layout
    (slot 2e = u->v, slot 2e+1 = v->u for edge e).
    """

    nu: np.ndarray
    flows: np.ndarray
    step: int
    seed_vertices: tuple[int, ...]

    @property
    def class_count(self) -> int:
        return self.nu.shape[0]


@dataclass(frozen=True)
class ClassTransition:
    """One class's transition probabilities (per slot) and the per-edge
    subordination it was built from."""

    class_id: int
    probs: np.ndarray
    subordination: np.ndarray


def initial_state(g: WeightedGraph, cfg: CompetitionConfig) -> SystemState:
    """Delta distribution per class on distinct seed vertices.

    Seeds come from cfg.seed_vertices when given, otherwise they are sampled
    without replacement by the seeded RNG, so the same seed always yields the
    same state.
    """
    k = cfg.class_count
    if k > g.vertex_count:
        raise ParameterError(
            f"class_count {k} exceeds vertex count {g.vertex_count}"
        )
    if cfg.seed_vertices is not None:
        seeds = cfg.seed_vertices
        for v in seeds:
            if not (0 <= v < g.vertex_count):
                raise ParameterError(f"seed vertex {v} out of range")
    else:
        rng = np.random.default_rng(cfg.seed)
        seeds = tuple(int(v) for v in rng.choice(g.vertex_count, size=k, replace=False))
    nu = np.zeros((k, g.vertex_count))
    nu[np.arange(k), list(seeds)] = 1.0
    flows = np.zeros((k, 2 * g.edge_count))
    return SystemState(nu=nu, flows=flows, step=0, seed_vertices=seeds)


def _sigma_matrix(g: WeightedGraph, state: SystemState, class_count: int) -> np.ndarray:
    """Per-class, per-edge subordination (K, E): 1 - own share of the edge's
    two-way flow, or 1/K where the edge carries no flow at all."""
    und = state.flows[:, 0::2] + state.flows[:, 1::2]
    total = und.sum(axis=0)
    share = np.divide(
        und, total[None, :], out=np.zeros_like(und), where=total > 0.0
    )
    return np.where(total > 0.0, 1.0 - share, 1.0 / class_count)


def subordination(g: WeightedGraph, state: SystemState, c: int, i: int, j: int) -> float:
    """Subordination of class c on edge {i, j} in the given state."""
    k = state.class_count
    if not (0 <= c < k):
        raise ParameterError(f"class {c} out of range for {k} classes")
    e = g.edge_index(i, j)
    und = state.flows[:, 2 * e] + state.flows[:, 2 * e + 1]
    total = float(und.sum())
    if total <= 0.0:
        return 1.0 / k
    return float(1.0 - und[c] / total)


def _require_no_isolated(g: WeightedGraph) -> None:
    iso = g.isolated_vertices
    if iso.size:
        raise SimulationError(
            f"vertex {int(iso[0])} is isolated; the walk dynamics need every "
            "vertex to have at least one edge"
        )


def build_transition(
    g: WeightedGraph, state: SystemState, cfg: CompetitionConfig, c: int
) -> ClassTransition:
    """Transition probabilities of class c out of `state`."""
    _require_no_isolated(g)
    if not (0 <= c < cfg.class_count):
        raise ParameterError(f"class {c} out of range for {cfg.class_count} classes")
    sigma = _sigma_matrix(g, state, cfg.class_count)[c]
    probs = g.slot_walk * (1.0 - cfg.lam * np.repeat(sigma, 2))
    return ClassTransition(class_id=c, probs=probs, subordination=sigma)


def step(g: WeightedGraph, state: SystemState, cfg: CompetitionConfig) -> SystemState:
    """Advance the system one step.

    New flows are nu_i(t) * p_ij(t); new nu is the arriving mass renormalized
    to a distribution.  Raises DegenerateStateError if a class's entire mass
    is absorbed (possible only at lam = 1).
    """
    k = cfg.class_count
    sigma = _sigma_matrix(g, state, k)
    probs = g.slot_walk[None, :] * (1.0 - cfg.lam * np.repeat(sigma, 2, axis=1))
    contrib = state.nu[:, g.slot_src] * probs
    raw = np.empty_like(state.nu)
    for c in range(k):
        raw[c] = np.bincount(
            g.slot_dst, weights=contrib[c], minlength=g.vertex_count
        )
    totals = raw.sum(axis=1)
    dead = np.flatnonzero(totals <= 0.0)
    if dead.size:
        raise DegenerateStateError(
            f"class {int(dead[0])} lost all mass at step {state.step + 1} "
            "(every outgoing edge fully subordinated at lam = 1)"
        )
    return SystemState(
        nu=raw / totals[:, None],
        flows=contrib,
        step=state.step + 1,
        seed_vertices=state.seed_vertices,
    )


def run(g: WeightedGraph, cfg: CompetitionConfig) -> SystemState:
    """Run the dynamics from a fresh initial state.

    Stops at cfg.max_steps, or earlier once the total L1 change of nu stays
    below cfg.tol for CONVERGENCE_WINDOW consecutive steps.
    """
    _require_no_isolated(g)
    state = initial_state(g, cfg)
    calm = 0
    for _ in range(cfg.max_steps):
        nxt = step(g, state, cfg)
        delta = float(np.abs(nxt.nu - state.nu).sum())
        state = nxt
        calm = calm + 1 if delta < cfg.tol else 0
        if calm >= CONVERGENCE_WINDOW:
            break
    return state


def state_to_json(g: WeightedGraph, state: SystemState) -> dict:
    """Snapshot dict: {step, nu, flows} with one record per nonzero directed flow."""
    records = []
    for c in range(state.class_count):
        row = state.flows[c]
        for s in np.flatnonzero(row > 0.0).tolist():
            records.append(
                {
                    "class": c,
                    "i": int(g.slot_src[s]),
                    "j": int(g.slot_dst[s]),
                    "value": float(row[s]),
                }
            )
    return {
        "step": state.step,
        "nu": [row.tolist() for row in state.nu],
        "flows": records,
    }


def state_from_json(g: WeightedGraph, obj: dict) -> SystemState:
    nu = np.asarray(obj["nu"], dtype=np.float64)
    if nu.ndim != 2 or nu.shape[1] != g.vertex_count:
        raise ParameterError("nu shape does not match the graph")
    flows = np.zeros((nu.shape[0], 2 * g.edge_count))
    for rec in obj["flows"]:
        e = g.edge_index(rec["i"], rec["j"])
        slot = 2 * e if rec["i"] == int(g.edges_u[e]) else 2 * e + 1
        flows[rec["class"], slot] = float(rec["value"])
    seeds = tuple(int(np.argmax(row)) for row in nu)
    return SystemState(nu=nu, flows=flows, step=int(obj["step"]), seed_vertices=seeds)


def save_state(g: WeightedGraph, state: SystemState, path: str | Path) -> None:
    Path(path).write_text(json.dumps(state_to_json(g, state), indent=2) + "\n")


def load_state(g: WeightedGraph, path: str | Path) -> SystemState:
    return state_from_json(g, json.loads(Path(path).read_text()))
